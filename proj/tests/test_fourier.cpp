#include "conedecay/fourier.hpp"

#include <omp.h>

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

using namespace conedecay;

namespace {

constexpr double kPi = std::numbers::pi;

ParticleMeasure random_measure(int dim, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0), w(0.0, 1.0);
  ParticleMeasure mu(dim);
  for (int i = 0; i < n; ++i) {
    Vec p(dim);
    for (int j = 0; j < dim; ++j) p(j) = u(rng);
    mu.add(p, w(rng));
  }
  return mu;
}

ParticleMeasure lebesgue_unit_interval(int nodes) {
  const ChartFn id = [](const Vec& x) { return x; };
  return surface_measure(id, Box::interval(0, 1), make_bump(Box::interval(-1, 2), Box::interval(-2, 3)), nodes);
}

}  // namespace

TEST_CASE("transform of simple measures") {
  const ParticleMeasure mu = random_measure(2, 100, 1);
  CHECK(ft(mu, Vec::Zero(2)).real() == doctest::Approx(mu.total_mass()).epsilon(1e-14));

  const ParticleMeasure delta = ParticleMeasure::point_mass(Vec::Zero(3));
  for (double k : {0.0, 1.0, 1e3}) CHECK(std::abs(ft(delta, make_vec({k, -k, 2 * k})) - 1.0) <= 1e-15);

  ParticleMeasure pair(1);
  pair.add(make_vec({-0.5}), 0.5);
  pair.add(make_vec({0.5}), 0.5);
  CHECK(std::abs(ft(pair, make_vec({1.0})) - cplx(-1.0, 0.0)) <= 1e-15);
}

TEST_CASE("conjugate symmetry, mass bound and linearity") {
  const ParticleMeasure a = random_measure(3, 20000, 2);
  const ParticleMeasure b = random_measure(3, 5000, 3);
  ParticleMeasure u = a;
  u.append(b, 2.5);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.0, 50.0);
  for (int q = 0; q < 20; ++q) {
    const Vec xi = make_vec({g(rng), g(rng), g(rng)});
    const cplx fa = ft(a, xi);
    CHECK(std::abs(ft(a, Vec(-xi)) - std::conj(fa)) <= 1e-13 * a.total_mass());
    CHECK(std::abs(fa) <= a.total_mass() * (1.0 + 1e-14));
    CHECK(std::abs(ft(u, xi) - (fa + 2.5 * ft(b, xi))) <= 1e-12 * u.total_mass());
  }
}

TEST_CASE("vectorized kernel against the serial reference") {
  const ParticleMeasure mu = random_measure(4, 50000, 5);
  double worst = 0.0;
  for (double k : {0.5, 10.0, 300.0, 4096.0}) {
    const Vec xi = k * make_vec({0.3, -0.5, 0.7, 0.1}).normalized();
    worst = std::max(worst, std::abs(ft(mu, xi) - ft_reference(mu, xi)) / mu.total_mass());
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("results do not depend on the thread count") {
  const ParticleMeasure mu = random_measure(2, 100000, 6);
  std::vector<Vec> xis;
  for (double k = 1; k < 2000; k *= 1.7) xis.push_back(make_vec({k, 0.3 * k}));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const auto one = ft_many(mu, xis);
  omp_set_num_threads(3);
  const auto three = ft_many(mu, xis);
  omp_set_num_threads(saved);
  for (std::size_t i = 0; i < xis.size(); ++i) {
    CHECK(one[i] == three[i]);
    CHECK(one[i] == ft(mu, xis[i]));
  }
}

TEST_CASE("geometric grid") {
  const auto ks = geometric_grid(16, 4096, 8);
  CHECK(ks.size() == 65);
  CHECK(ks.front() == 16.0);
  CHECK(ks.back() == doctest::Approx(4096.0).epsilon(1e-14));
  for (std::size_t i = 1; i < ks.size(); ++i) CHECK(ks[i] > ks[i - 1]);
  CHECK_THROWS_AS(geometric_grid(10, 5, 8), DomainError);
}

TEST_CASE("exponent fits on synthetic data") {
  const auto ks = geometric_grid(16, 4096, 8);
  std::vector<double> power, wobble, flat;
  for (double k : ks) {
    power.push_back(std::pow(k, -0.5));
    wobble.push_back(std::pow(k, -0.5) * std::abs(std::cos(k)));
    flat.push_back(3.0);
  }
  const FitResult p = fit_exponent(ks, power, Envelope::Raw, 8);
  CHECK(p.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit_exponent(ks, power, Envelope::BlockMax, 8).exponent == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(fit_exponent(ks, wobble, Envelope::BlockMax, 8).exponent - 0.5) <= 0.05);
  CHECK(std::abs(fit_exponent(ks, flat, Envelope::Raw, 8).exponent) <= 1e-12);

  // invariance under positive scaling
  std::vector<double> scaled;
  for (double v : wobble) scaled.push_back(17.0 * v);
  CHECK(fit_exponent(ks, scaled, Envelope::BlockMax, 8).exponent ==
        doctest::Approx(fit_exponent(ks, wobble, Envelope::BlockMax, 8).exponent).epsilon(1e-12));

  const std::vector<double> zeros(ks.size(), 0.0);
  CHECK_THROWS_AS(fit_exponent(ks, zeros, Envelope::Raw, 8), AllZeroValues);
  const auto short_ks = geometric_grid(16, 64, 8);
  CHECK_THROWS_AS(fit_exponent(short_ks, std::vector<double>(short_ks.size(), 1.0), Envelope::Raw, 8),
                  InsufficientRange);
}

TEST_CASE("ray profiles") {
  const ParticleMeasure delta = ParticleMeasure::point_mass(make_vec({0.2, 0.1}));
  const DecayProfile flat = ray_profile(delta, make_vec({1.0, 0.0}), 16, 4096, 8);
  CHECK(std::abs(flat.fit.exponent) <= 1e-12);

  // |mu^(k)| = |sin(pi k) / (pi k)| for Lebesgue measure on [0, 1]
  const ParticleMeasure leb = lebesgue_unit_interval(65536);
  for (double k : {2.5, 10.25, 100.5, 1000.3}) {
    CHECK(std::abs(ft(leb, make_vec({k}))) == doctest::Approx(std::abs(std::sin(kPi * k) / (kPi * k))).epsilon(1e-9));
  }
  const DecayProfile sinc = ray_profile(leb, make_vec({1.0}), 16, 4096, 8, Envelope::BlockMax);
  CHECK(std::abs(sinc.fit.exponent - 1.0) <= 0.05);
  CHECK(sinc.warnings.empty());

  const DecayProfile coarse = ray_profile(lebesgue_unit_interval(64), make_vec({1.0}), 16, 4096, 8);
  CHECK_FALSE(coarse.warnings.empty());
  CHECK_THROWS_AS(ray_profile(leb, make_vec({2.0}), 16, 4096, 8), DomainError);
}

TEST_CASE("direction sets") {
  for (int dim = 2; dim <= 4; ++dim) {
    const auto dirs = sphere_directions(dim, 64, 7);
    REQUIRE(dirs.size() == 64);
    for (const Vec& d : dirs) CHECK(d.norm() == doctest::Approx(1.0).epsilon(1e-14));
    // deterministic for a fixed seed
    const auto again = sphere_directions(dim, 64, 7);
    for (std::size_t i = 0; i < dirs.size(); ++i) CHECK(dirs[i] == again[i]);
  }
  // roughly balanced: the mean direction is small
  Vec mean = Vec::Zero(3);
  for (const Vec& d : sphere_directions(3, 256)) mean += d / 256.0;
  CHECK(mean.norm() <= 0.05);
}

TEST_CASE("direction supremum profiles") {
  const auto ks = geometric_grid(16, 256, 8);
  const ParticleMeasure delta = ParticleMeasure::point_mass(Vec::Zero(2));
  CHECK(std::abs(direction_sup_profile(delta, 32, ks, 8).dim_proxy) <= 1e-12);

  // flat segment: the transform is constant along the normal direction
  const ChartFn seg = [](const Vec& x) { return make_vec({x(0), 0.0}); };
  const ParticleMeasure flat_seg =
      surface_measure(seg, Box::interval(-0.5, 0.5), centered_bump(Vec::Zero(1), 0.25, 0.5), 256);
  CHECK(direction_sup_profile(flat_seg, 64, ks, 8, 0).dim_proxy <= 0.1);

  // curved arc: the supremum over directions decays like k^(-1/2)
  const ChartFn arc = [](const Vec& x) { return make_vec({x(0), x(0) * x(0)}); };
  const ParticleMeasure curved =
      surface_measure(arc, Box::interval(-0.5, 0.5), centered_bump(Vec::Zero(1), 0.25, 0.5), 2048);
  CHECK(std::abs(direction_sup_profile(curved, 64, ks, 8, 0).dim_proxy - 1.0) <= 0.2);
  CHECK_THROWS_AS(direction_sup_profile(curved, 8, ks, 8), DomainError);
}
