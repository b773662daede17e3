#pragma once

#include "conedecay/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace conedecay {

constexpr double kGradStep = 1e-6;
// Second differences of values lose about eps |f| / step^2 to round-off, so
// the Hessian step is larger than the gradient step.
constexpr double kHessStep = 1e-4;
// Step for differencing an analytic Jacobian.
constexpr double kJacDiffStep = 1e-5;

struct QuadraticSignature {
  int n = 1;
  int m = 1;

  QuadraticSignature() = default;
  QuadraticSignature(int n_, int m_);

  double operator()(const Vec& y) const;
  // H Q_m(0) = diag(+2 (m times), -2 (n-m times)).
  Mat hessian() const;
  bool operator==(const QuadraticSignature&) const = default;
};

double quadratic_form(const QuadraticSignature& sig, const Vec& y);

using ValueFn = std::function<double(const Vec&)>;
using GradFn = std::function<Vec(const Vec&)>;
using HessFn = std::function<Mat(const Vec&)>;

Vec fd_gradient(const ValueFn& f, const Vec& y, double step = kGradStep);
Mat fd_hessian(const ValueFn& f, const Vec& y, double step = kHessStep);

class ScalarField {
 public:
  ScalarField() = default;
  ScalarField(Box domain, ValueFn value, GradFn gradient = {}, HessFn hessian = {});

  int dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  double value(const Vec& y) const { return value_(y); }
  double operator()(const Vec& y) const { return value_(y); }
  Vec gradient(const Vec& y) const;
  Mat hessian(const Vec& y) const;
  bool analytic_gradient() const { return static_cast<bool>(gradient_); }
  bool analytic_hessian() const { return static_cast<bool>(hessian_); }
  // Copy that ignores the analytic derivatives.
  ScalarField finite_difference() const;
  const ValueFn& value_fn() const { return value_; }

 private:
  Box domain_;
  ValueFn value_;
  GradFn gradient_;
  HessFn hessian_;
};

// Map between open subsets of R^n with Jacobian and componentwise Hessians.
class VectorMap {
 public:
  using Fn = std::function<Vec(const Vec&)>;
  using JacFn = std::function<Mat(const Vec&)>;
  using SecondFn = std::function<Mat(const Vec&, int)>;

  VectorMap() = default;
  VectorMap(Box domain, Fn f, JacFn jac = {}, SecondFn second = {});
  static VectorMap identity(const Box& domain);

  int dim() const { return domain_.dim(); }
  const Box& domain() const { return domain_; }
  Vec operator()(const Vec& x) const { return f_(x); }
  Mat jacobian(const Vec& x) const;
  // Hessian of output component i.
  Mat component_hessian(const Vec& x, int i) const;
  bool analytic_second() const { return static_cast<bool>(second_); }

 private:
  Box domain_;
  Fn f_;
  JacFn jac_;
  SecondFn second_;
};

// phi(x) = (varphi(x), Q_m(x)), the reparametrized surface in R^d.
struct SurfaceChart {
  VectorMap varphi;
  QuadraticSignature sig;

  int param_dim() const { return sig.n; }
  int ambient_dim() const { return sig.n + 1; }
  Vec operator()(const Vec& x) const;
};

using ParamMap = std::function<Vec(const Vec&)>;

// h * (phi(x), 1)
Vec cone_chart(const ParamMap& phi, const Vec& x, double h);
// (phi(x), h)
Vec cylinder_chart(const ParamMap& phi, const Vec& x, double h);

struct GraphSurface {
  std::string id;
  ScalarField g;
  // Closed-form Morse reparametrization when one is known.
  std::optional<VectorMap> varphi;
  std::optional<QuadraticSignature> sig;

  int param_dim() const { return g.dim(); }
  bool normalized(double tol = 1e-10) const;
};

GraphSurface catalog_surface(const std::string& id);
std::vector<std::string> catalog_surface_ids();

struct Curvature {
  std::vector<double> principal;  // descending
  double gaussian = 0.0;
};

Curvature curvature(const GraphSurface& surface, const Vec& y);

struct MorseParametrization {
  VectorMap varphi;
  QuadraticSignature sig;
  bool closed_form = false;
};

enum class ParametrizeMode { Auto, Numeric };

MorseParametrization morse_parametrize(const GraphSurface& surface,
                                       ParametrizeMode mode = ParametrizeMode::Auto);

}  // namespace conedecay
