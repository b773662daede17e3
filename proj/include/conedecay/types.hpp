#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace conedecay {

// Parameters live in R^{<=2}, ambient points in R^{<=4}. Fixed-capacity Eigen
// types keep the per-atom evaluators free of heap traffic.
constexpr int kMaxDim = 4;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;
using cplx = std::complex<double>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define CONEDECAY_ERROR(Name)      \
  struct Name : Error {            \
    using Error::Error;            \
  }

CONEDECAY_ERROR(DimensionMismatch);
CONEDECAY_ERROR(DomainError);
CONEDECAY_ERROR(ConfigError);
CONEDECAY_ERROR(EigenFailure);
CONEDECAY_ERROR(DegenerateCritical);
CONEDECAY_ERROR(NotCritical);
CONEDECAY_ERROR(BoxTooLarge);
CONEDECAY_ERROR(QuadratureFailure);
CONEDECAY_ERROR(SingularJacobian);
CONEDECAY_ERROR(NegativeRadicand);
CONEDECAY_ERROR(ShrinkExhausted);
CONEDECAY_ERROR(NotNested);
CONEDECAY_ERROR(EmptySupport);
CONEDECAY_ERROR(ZeroMass);
CONEDECAY_ERROR(CapacityExceeded);
CONEDECAY_ERROR(AllZeroValues);
CONEDECAY_ERROR(InsufficientRange);
CONEDECAY_ERROR(ResolutionExceeded);
CONEDECAY_ERROR(IoError);

#undef CONEDECAY_ERROR

Vec make_vec(std::initializer_list<double> values);

// Axis-aligned box [lo, hi] in R^n.
struct Box {
  Vec lo;
  Vec hi;

  Box() = default;
  Box(Vec lo_, Vec hi_);

  static Box cube(int dim, double half_width);
  static Box interval(double a, double b);

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(const Vec& y, double slack = 0.0) const;
  bool degenerate() const;
  bool strictly_inside(const Box& outer) const;
  Vec center() const { return 0.5 * (lo + hi); }
  Vec half_widths() const { return 0.5 * (hi - lo); }
  double min_half_width() const { return half_widths().minCoeff(); }
  // Same center, half-widths multiplied by f.
  Box scaled(double f) const;
  // Product box (this) x (other).
  Box product(const Box& other) const;
};

inline void check_dim(long got, long want, const char* what) {
  if (got != want) {
    throw DimensionMismatch(std::string(what) + ": expected dimension " + std::to_string(want) +
                            ", got " + std::to_string(got));
  }
}

}  // namespace conedecay
