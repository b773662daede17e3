#pragma once

#include "conedecay/measures.hpp"

#include <string>
#include <vector>

namespace conedecay {

namespace kernel {

// Atoms in [begin, end) of a structure-of-arrays measure:
// sum_i w_i exp(-2 pi i x_i . xi). Vectorized, single-threaded.
cplx phase_sum(const double* const* coords, int dim, const double* w, std::size_t begin, std::size_t end,
               const double* xi);

}  // namespace kernel

// Atom block size of the deterministic chunked reduction.
constexpr std::size_t kChunk = 8192;

// mu^(xi) = sum_j w_j exp(-2 pi i x_j . xi). Chunks are summed in parallel and
// combined pairwise in a fixed order, so results do not depend on the thread
// count.
cplx ft(const ParticleMeasure& mu, const Vec& xi);
std::vector<cplx> ft_many(const ParticleMeasure& mu, const std::vector<Vec>& xis);
// Serial scalar reference with libm sin/cos and no phase reduction tricks.
cplx ft_reference(const ParticleMeasure& mu, const Vec& xi);

cplx pairwise_sum(const cplx* x, std::size_t n);

enum class Envelope { Raw, BlockMax };
std::string to_string(Envelope e);

struct FitResult {
  double exponent = 0.0;  // decay rate, minus the log-log slope
  double r2 = 0.0;
  std::size_t points = 0;
};

struct DecayProfile {
  std::vector<double> ks;
  std::vector<double> values;
  std::string direction;  // label, "sup" for direction suprema
  Vec eta;
  int points_per_octave = 8;
  Envelope mode = Envelope::BlockMax;
  FitResult fit;
  std::vector<std::string> warnings;

  void write_csv(const std::string& path) const;
};

// kmin * 2^(j / ppo) up to kmax inclusive.
std::vector<double> geometric_grid(double kmin, double kmax, int points_per_octave);

FitResult fit_exponent(const std::vector<double>& ks, const std::vector<double>& values, Envelope mode,
                       int points_per_octave);
FitResult fit_exponent(const DecayProfile& profile, Envelope mode);

// Assemble a profile from precomputed magnitudes and fit it.
DecayProfile make_profile(std::vector<double> ks, std::vector<double> values, int points_per_octave,
                          Envelope mode, std::string label, Vec eta = Vec());

DecayProfile ray_profile(const ParticleMeasure& mu, const Vec& eta, double k_min, double k_max,
                         int points_per_octave, Envelope mode = Envelope::BlockMax);

// Uniform angles in R^2, Fibonacci points on the sphere in R^3 and R^4
// (optionally rotated by a seeded random rotation).
std::vector<Vec> sphere_directions(int ambient_dim, int count, unsigned long long seed = 0);

struct SupProfile {
  DecayProfile profile;
  double dim_proxy = 0.0;  // 2 * fitted exponent
};

SupProfile direction_sup_profile(const ParticleMeasure& mu, int n_directions, const std::vector<double>& ks,
                                 int points_per_octave, unsigned long long seed = 0);

}  // namespace conedecay
