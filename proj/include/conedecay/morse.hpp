#pragma once

#include "conedecay/quadrature.hpp"
#include "conedecay/surfaces.hpp"

#include <functional>
#include <memory>
#include <optional>

namespace conedecay {

// f(., t) with the family parameter t frozen.
struct FixedFamily {
  ValueFn value;
  HessFn hessian;  // optional; finite differences when empty

  double operator()(const Vec& x) const { return value(x); }
  Mat hess(const Vec& x) const;
  Vec grad(const Vec& x) const { return fd_gradient(value, x); }
};

// Smooth family f(x, t), x in R^n, t in R^p. Families are described by how
// they freeze t so per-t work (solves, factorizations) is done once.
struct FunctionFamily {
  int n = 1;
  int p = 0;
  std::function<FixedFamily(const Vec& t)> fix;

  double value(const Vec& x, const Vec& t) const { return fix(t).value(x); }

  static FunctionFamily from_field(const ScalarField& f);
};

QuadraticSignature signature_at(const FunctionFamily& f, const Vec& t);

struct MorseOptions {
  int max_halvings = 20;
  int samples_x = 9;        // per dimension, for the sign/invertibility sweep
  int samples_t = 5;
  double min_jac_det = 1e-8;
  int quad_nodes = 16;
  double jac_step = 1e-5;
};

class MorseChart {
 public:
  // tau(., t) for one frozen t.
  class Slice {
   public:
    Vec operator()(const Vec& x) const;
    // Remainder coefficients f^{(1)}_{jk}(y, t) in the rotated frame y = O^T x.
    Mat remainder_coefficients(const Vec& y) const;
    const Mat& rotation() const { return o_; }

   private:
    friend class MorseChart;
    const MorseChart* chart_ = nullptr;
    FixedFamily f_;
    Mat o_;
    Vec signs_;
    std::vector<int> order_;  // positive squares first
  };

  Slice slice(const Vec& t) const;
  Vec tau(const Vec& x, const Vec& t) const { return slice(t)(x); }
  Mat jacobian(const Vec& x, const Vec& t, double step = 1e-5) const;

  const QuadraticSignature& sig() const { return sig_; }
  const Box& valid_box_V() const { return v_; }
  const Box& valid_box_W() const { return w_; }
  double jac_det_at_0() const { return jac_det0_; }
  int halvings() const { return halvings_; }
  int n() const { return sig_.n; }
  int p() const { return f_->p; }

 private:
  friend MorseChart normal_form(const FunctionFamily&, const QuadraticSignature&, const Box&, const Box&,
                                const MorseOptions&);
  std::shared_ptr<const FunctionFamily> f_;
  QuadraticSignature sig_;
  Box v_, w_;
  double jac_det0_ = 0.0;
  int halvings_ = 0;
  Rule1D quad_;
};

// Builds tau with f(x, t) = Q_m(tau(x, t)) on V x W, halving both boxes until
// the sign and invertibility conditions hold on a sample grid.
MorseChart normal_form(const FunctionFamily& f, const QuadraticSignature& sig, const Box& V, const Box& W,
                       const MorseOptions& opts = {});

struct ChartReport {
  double max_residual = 0.0;
  double min_jacdet = 0.0;
  std::size_t samples = 0;
};

// Dense residual sweep. Boxes default to the chart's validity boxes.
ChartReport verify_chart(const MorseChart& chart, const FunctionFamily& f, int samples_per_dim,
                         std::optional<Box> V = std::nullopt, std::optional<Box> W = std::nullopt);

// Tensor grid with `per_dim` points per coordinate including the faces.
std::vector<Vec> grid_points(const Box& box, int per_dim);

}  // namespace conedecay
