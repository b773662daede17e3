#include "conedecay/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace conedecay {

namespace {

void coord_ptrs(const ParticleMeasure& mu, const double* (&ptrs)[kMaxDim]) {
  for (int j = 0; j < kMaxDim; ++j) ptrs[j] = j < mu.ambient_dim() ? mu.coord(j).data() : nullptr;
}

// Chunked sum with the chunk loop run by the calling thread only.
cplx ft_serial(const ParticleMeasure& mu, const double* (&ptrs)[kMaxDim], const Vec& xi, std::vector<cplx>& parts) {
  const std::size_t n = mu.size();
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  parts.resize(nchunks);
  for (std::size_t c = 0; c < nchunks; ++c) {
    parts[c] = kernel::phase_sum(ptrs, mu.ambient_dim(), mu.weights().data(), c * kChunk,
                                 std::min(n, (c + 1) * kChunk), xi.data());
  }
  return pairwise_sum(parts.data(), nchunks);
}

}  // namespace

cplx pairwise_sum(const cplx* x, std::size_t n) {
  if (n <= 16) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

cplx ft(const ParticleMeasure& mu, const Vec& xi) {
  check_dim(xi.size(), mu.ambient_dim(), "ft");
  const std::size_t n = mu.size();
  if (n == 0) return 0.0;
  const double* ptrs[kMaxDim];
  coord_ptrs(mu, ptrs);
  const long nchunks = static_cast<long>((n + kChunk - 1) / kChunk);
  std::vector<cplx> parts(nchunks);
#pragma omp parallel for schedule(static) if (nchunks > 1)
  for (long c = 0; c < nchunks; ++c) {
    parts[c] = kernel::phase_sum(ptrs, mu.ambient_dim(), mu.weights().data(), c * kChunk,
                                 std::min(n, (c + 1) * kChunk), xi.data());
  }
  return pairwise_sum(parts.data(), parts.size());
}

std::vector<cplx> ft_many(const ParticleMeasure& mu, const std::vector<Vec>& xis) {
  for (const Vec& xi : xis) check_dim(xi.size(), mu.ambient_dim(), "ft_many");
  std::vector<cplx> out(xis.size());
  if (mu.size() > 16 * kChunk) {
    for (std::size_t i = 0; i < xis.size(); ++i) out[i] = ft(mu, xis[i]);
    return out;
  }
  const double* ptrs[kMaxDim];
  coord_ptrs(mu, ptrs);
  const long m = static_cast<long>(xis.size());
#pragma omp parallel
  {
    std::vector<cplx> parts;
#pragma omp for schedule(dynamic, 1)
    for (long i = 0; i < m; ++i) out[i] = ft_serial(mu, ptrs, xis[i], parts);
  }
  return out;
}

cplx ft_reference(const ParticleMeasure& mu, const Vec& xi) {
  check_dim(xi.size(), mu.ambient_dim(), "ft_reference");
  const std::size_t n = mu.size();
  std::vector<double> re(n), im(n);
  for (std::size_t i = 0; i < n; ++i) {
    double p = 0.0;
    for (int j = 0; j < mu.ambient_dim(); ++j) p += mu.coord(j)[i] * xi(j);
    const double a = -2.0 * std::numbers::pi * p;
    re[i] = mu.weight(i) * std::cos(a);
    im[i] = mu.weight(i) * std::sin(a);
  }
  return {pairwise_sum(re.data(), n), pairwise_sum(im.data(), n)};
}

std::string to_string(Envelope e) { return e == Envelope::Raw ? "raw" : "blockmax"; }

void DecayProfile::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "k,value\n";
  out.precision(17);
  for (std::size_t i = 0; i < ks.size(); ++i) out << ks[i] << ',' << values[i] << '\n';
}

DecayProfile ray_profile(const ParticleMeasure& mu, const Vec& eta, double k_min, double k_max,
                         int points_per_octave, Envelope mode) {
  check_dim(eta.size(), mu.ambient_dim(), "ray_profile");
  if (std::abs(eta.norm() - 1.0) > 1e-9) throw DomainError("ray_profile: direction must be a unit vector");
  std::vector<double> ks = geometric_grid(k_min, k_max, points_per_octave);
  std::vector<Vec> xis;
  for (double k : ks) xis.push_back(k * eta);
  const auto vals = ft_many(mu, xis);
  std::vector<double> mags;
  for (const cplx& v : vals) mags.push_back(std::abs(v));
  DecayProfile p = make_profile(ks, mags, points_per_octave, mode, "ray", eta);
  const double need = 10.0 * k_max * mu.diameter();
  if (static_cast<double>(mu.size()) < need) {
    p.warnings.push_back("resolution guard: " + std::to_string(mu.size()) + " atoms < 10 k_max diameter = " +
                         std::to_string(need));
  }
  return p;
}

namespace {

Mat random_rotation(int dim, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) a(i, j) = g(rng);
  }
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR();
  for (int j = 0; j < dim; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

std::vector<Vec> sphere_directions(int ambient_dim, int count, unsigned long long seed) {
  std::vector<Vec> dirs;
  const double pi = std::numbers::pi;
  if (ambient_dim == 1) {
    dirs.push_back(make_vec({1.0}));
    return dirs;
  }
  if (ambient_dim == 2) {
    double jitter = 0.0;
    if (seed != 0) {
      std::mt19937_64 rng(seed);
      jitter = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    for (int i = 0; i < count; ++i) {
      const double a = 2.0 * pi * (i + jitter) / count;
      dirs.push_back(make_vec({std::cos(a), std::sin(a)}));
    }
    return dirs;
  }
  if (ambient_dim == 3) {
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      dirs.push_back(make_vec({r * std::cos(golden * i), r * std::sin(golden * i), z}));
    }
  } else if (ambient_dim == 4) {
    // super-Fibonacci spiral on S^3
    const double phi = std::sqrt(2.0), psi = 1.533751168755204288118041;
    for (int i = 0; i < count; ++i) {
      const double s = i + 0.5;
      const double r = std::sqrt(s / count), R = std::sqrt(1.0 - s / count);
      const double a = 2.0 * pi * s / phi, b = 2.0 * pi * s / psi;
      dirs.push_back(make_vec({r * std::sin(a), r * std::cos(a), R * std::sin(b), R * std::cos(b)}));
    }
  } else {
    throw DomainError("sphere_directions: ambient dimension must be in [1, 4]");
  }
  if (seed != 0) {
    const Mat q = random_rotation(ambient_dim, seed);
    for (Vec& d : dirs) d = q * d;
  }
  return dirs;
}

SupProfile direction_sup_profile(const ParticleMeasure& mu, int n_directions, const std::vector<double>& ks,
                                 int points_per_octave, unsigned long long seed) {
  if (n_directions < 16) throw DomainError("direction_sup_profile: need at least 16 directions");
  const auto dirs = sphere_directions(mu.ambient_dim(), n_directions, seed);
  std::vector<Vec> xis;
  xis.reserve(ks.size() * dirs.size());
  for (double k : ks) {
    for (const Vec& d : dirs) xis.push_back(k * d);
  }
  const auto vals = ft_many(mu, xis);
  std::vector<double> sup(ks.size(), 0.0);
  for (std::size_t i = 0; i < ks.size(); ++i) {
    for (std::size_t j = 0; j < dirs.size(); ++j) sup[i] = std::max(sup[i], std::abs(vals[i * dirs.size() + j]));
  }
  SupProfile out;
  out.profile = make_profile(ks, sup, points_per_octave, Envelope::BlockMax, "sup");
  out.dim_proxy = 2.0 * out.profile.fit.exponent;
  return out;
}

}  // namespace conedecay
