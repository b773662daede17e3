#pragma once

#include "conedecay/reparam.hpp"
#include "conedecay/types.hpp"

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace conedecay {

// s(u) = E(u) / (E(u) + E(1-u)), E(u) = exp(-1/u) for u > 0.
double smooth_step(double u);
double smooth_step_derivative(double u);

// Tensor-product bump: 1 on `inner`, 0 outside `outer`.
class BumpFunction {
 public:
  BumpFunction() = default;
  BumpFunction(Box inner, Box outer);

  int dim() const { return outer_.dim(); }
  const Box& inner() const { return inner_; }
  const Box& outer() const { return outer_; }
  double value(const Vec& y) const;
  double operator()(const Vec& y) const { return value(y); }
  double partial(const Vec& y, int j) const;
  // Integral over R^n, to quadrature accuracy.
  double integral() const;
  double factor(int i, double y) const;

 private:
  double factor_derivative(int i, double y) const;
  Box inner_, outer_;
};

BumpFunction make_bump(const Box& inner, const Box& outer);
// Bump centred at c with per-coordinate inner/outer half-widths.
BumpFunction centered_bump(const Vec& center, double inner_half, double outer_half);

// Structure-of-arrays atom list. Parameter coordinates (x, h) ride along so
// push-forwards can act through the chart.
class ParticleMeasure {
 public:
  ParticleMeasure() = default;
  explicit ParticleMeasure(int ambient_dim, int param_dim = 0);

  static ParticleMeasure point_mass(const Vec& p, double w = 1.0);

  int ambient_dim() const { return ambient_dim_; }
  int param_dim() const { return param_dim_; }
  std::size_t size() const { return weights_.size(); }
  bool empty() const { return weights_.empty(); }

  void reserve(std::size_t n);
  // Resize the atom arrays; new atoms are zero until set().
  void resize(std::size_t n);
  void set(std::size_t i, const Vec& position, double weight, const Vec& params = Vec());
  void add(const Vec& position, double weight, const Vec& params = Vec());
  // Disjoint union with weights of `other` multiplied by `scale`.
  void append(const ParticleMeasure& other, double scale = 1.0);

  Vec position(std::size_t i) const;
  Vec params(std::size_t i) const;
  double weight(std::size_t i) const { return weights_[i]; }

  const std::vector<double>& coord(int j) const { return coords_[j]; }
  const std::vector<double>& param(int j) const { return params_[j]; }
  const std::vector<double>& weights() const { return weights_; }

  double total_mass() const;
  void scale_weights(double f);
  ParticleMeasure normalized() const;
  // Mass recorded before the last normalization (1 when never normalized).
  double prior_mass() const { return prior_mass_; }
  void set_prior_mass(double m) { prior_mass_ = m; }
  // Diameter of the bounding box of the atoms.
  double diameter() const;

 private:
  int ambient_dim_ = 0;
  int param_dim_ = 0;
  std::vector<std::vector<double>> coords_;
  std::vector<std::vector<double>> params_;
  std::vector<double> weights_;
  double prior_mass_ = 1.0;
};

double pairwise_sum(const double* x, std::size_t n);

void write_atoms(const ParticleMeasure& mu, const std::string& path);
ParticleMeasure read_atoms(const std::string& path);

using ChartFn = std::function<Vec(const Vec& params)>;

// Gauss-Legendre tensor grid over param_box, weights times density, then
// probability-normalized. Parameters are retained on the atoms.
ParticleMeasure surface_measure(const ChartFn& chart, const Box& param_box, const BumpFunction& density,
                                const std::vector<int>& nodes_per_dim);
ParticleMeasure surface_measure(const ChartFn& chart, const Box& param_box, const BumpFunction& density,
                                int nodes_per_dim);

// h (y, 1) with h ~ psi_h dh, from a measure on S with parameters x.
ParticleMeasure cone_lower_measure(const ParticleMeasure& mu_S, const BumpFunction& psi_h, int nodes_h);
// (y, h), the product measure.
ParticleMeasure cylinder_lower_measure(const ParticleMeasure& mu_S, const BumpFunction& psi_h, int nodes_h);

ParticleMeasure mollify(const ParticleMeasure& mu0, const BumpFunction& f);

// Atoms with parameters (x, h) moved to Phi(T_t(x), h); weights unchanged.
ParticleMeasure pushforward(const ReparamFamily& fam, const Vec& t, const ParticleMeasure& mu);

struct TNode {
  Vec t;
  double coef = 0.0;  // quadrature weight times psi_t(t)
};

// Tensor rule over the support of psi_t, zero-coefficient nodes dropped.
std::vector<TNode> t_nodes(const BumpFunction& psi_t, const std::vector<int>& nodes_per_dim);

constexpr std::size_t kMaterializeCap = 10'000'000;

// nu = sum_i coef_i nu_{t_i}, kept as (family, mu, nodes) so it can be either
// materialized or evaluated node by node.
class AveragedMeasure {
 public:
  AveragedMeasure(ReparamFamily fam, ParticleMeasure mu, std::vector<TNode> nodes);

  const ReparamFamily& family() const { return fam_; }
  const ParticleMeasure& base() const { return mu_; }
  const std::vector<TNode>& nodes() const { return nodes_; }
  std::size_t atom_count() const { return nodes_.size() * mu_.size(); }
  double coef_sum() const;
  double mass() const { return mu_.total_mass() * coef_sum(); }

  ParticleMeasure pushforward_at(std::size_t i) const { return pushforward(fam_, nodes_[i].t, mu_); }
  ParticleMeasure materialize(std::size_t cap = kMaterializeCap) const;
  // sum_i coef_i nu_{t_i}^(xi), streamed over the nodes.
  std::vector<cplx> ft_fubini(const std::vector<Vec>& xis) const;

 private:
  ReparamFamily fam_;
  ParticleMeasure mu_;
  std::vector<TNode> nodes_;
};

ParticleMeasure average(const ReparamFamily& fam, const ParticleMeasure& mu, const BumpFunction& psi_t,
                        const std::vector<int>& t_nodes_per_dim, std::size_t cap = kMaterializeCap);

}  // namespace conedecay
