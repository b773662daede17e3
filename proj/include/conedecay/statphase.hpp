#pragma once

#include "conedecay/fourier.hpp"
#include "conedecay/measures.hpp"
#include "conedecay/surfaces.hpp"

#include <functional>
#include <string>
#include <vector>

namespace conedecay {

constexpr double kLambda0 = 8.0;

// Amplitude psi with compact support.
struct Amplitude {
  Box support;
  ValueFn value;

  double operator()(const Vec& y) const { return value(y); }
  static Amplitude from_bump(const BumpFunction& b);
  // exp(-alpha |y - center|^2) times a cutoff bump.
  static Amplitude gaussian(const BumpFunction& cutoff, const Vec& center, double alpha);
};

struct PhaseProblem {
  int n = 1;
  ScalarField phase;
  Amplitude amplitude;
  Vec z0;
  QuadraticSignature sig;
  double hess_det = 0.0;  // c = |det H phi(z0)|

  // Validates the critical point and fills sig and c.
  static PhaseProblem make(ScalarField phase, Amplitude amplitude, Vec z0);
};

// pi^{n/2} (1 - i lambda)^{-m/2} (1 + i lambda)^{-(n-m)/2}, principal branches.
cplx gaussian_quadratic(double lambda, const QuadraticSignature& sig);

// f_m(w) = (w - i)^{-m/2} (w + i)^{-(n-m)/2}; the Gaussian integral equals
// pi^{n/2} lambda^{-n/2} f_m(1/lambda) for lambda > 0.
cplx f_m(cplx w, const QuadraticSignature& sig);
cplx f_m_derivative(cplx w, const QuadraticSignature& sig);
// a_0 = f_m(0) = exp(i pi (2m - n) / 4).
cplx leading_constant(const QuadraticSignature& sig);
// sup over |w| = 1/lambda0 of |f_m'(w)|.
double taylor_bound(const QuadraticSignature& sig, double lambda0 = kLambda0);

struct DirectResult {
  cplx value;
  cplx coarse;
  bool converged = false;
  double rel_diff = 0.0;
  std::vector<int> nodes_per_dim;  // coarse grid; the check uses twice as many
};

// Tensor Gauss-Legendre evaluation of int exp(i lambda phi) psi over the
// amplitude support. Nodes per dimension are at least
// nodes_per_wavelength * lambda * osc_j / (2 pi), osc_j = sup |d_j phi| * width_j.
DirectResult I_direct(double lambda, const PhaseProblem& problem, double nodes_per_wavelength = 10.0,
                      std::size_t node_cap = 20'000'000);

// The parallel tensor sum behind I_direct on a fixed grid of 16-node panels.
cplx I_tensor(double lambda, const PhaseProblem& problem, const std::vector<int>& nodes_per_dim);
// Serial scalar version of the same tensor sum, for cross-checking.
cplx I_direct_reference(double lambda, const PhaseProblem& problem, const std::vector<int>& nodes_per_dim);

cplx I_leading(double lambda, const PhaseProblem& problem);

// int exp(i lambda Q_m(y)) exp(-|y|^2) dy by tensor quadrature over
// [-half_width, half_width]^n, at least `nodes_per_wavelength` nodes per
// period of the fastest oscillation.
cplx gaussian_direct(double lambda, const QuadraticSignature& sig, double nodes_per_wavelength = 8.0,
                     double half_width = 6.5);

struct ScanResult {
  std::vector<double> lambdas;
  std::vector<double> errors;
  std::vector<cplx> direct;
  std::vector<cplx> leading;
  FitResult fit;
  double threshold = 0.0;  // (n + 1)/2 - 0.1
  bool pass = false;
  bool all_converged = true;

  void write_csv(const std::string& path) const;
};

ScanResult error_scan(const PhaseProblem& problem, const std::vector<double>& lambdas,
                      double nodes_per_wavelength = 10.0);

}  // namespace conedecay
