#include "conedecay/reparam.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace conedecay;

namespace {

Vec lifted_dot(const ReparamFamily& fam, const Vec& x, const Vec& t) {
  const Vec p = fam.chart(x);
  Vec a(p.size() + 1);
  a << p, 1.0;
  return make_vec({a.dot(fam.eta(t))});
}

}  // namespace

TEST_CASE("parabola eta") {
  CHECK(eta_parabola(0.0) == make_vec({0.0, 1.0, 0.0}));
  CHECK(eta_parabola(0.5) == make_vec({-1.0, 1.0, 0.25}));
  CHECK(make_vec({1.0, 1.0, 1.0}).dot(eta_parabola(0.5)) == 0.25);
}

TEST_CASE("perturbed parabola eta and T") {
  CHECK(eta_perturbed(0.0) == make_vec({0.0, 1.0, 0.0}));
  for (double x : {-0.2, 0.0, 0.13}) CHECK(T_perturbed(0.0, x) == doctest::Approx(x).epsilon(1e-15));
  for (double t : {-0.2, 0.0, 0.1}) CHECK(T_perturbed(t, t) == 0.0);

  const double x = 0.1, t = 0.05;
  const double T = T_perturbed(t, x);
  // high-precision evaluation of sqrt((x + x^3, x^2, 1) . eta(t))
  CHECK(T == doctest::Approx(0.0495012344132621057).epsilon(1e-14));
  CHECK(std::abs(T * T - make_vec({x + x * x * x, x * x, 1.0}).dot(eta_perturbed(t))) <= 1e-12);
  CHECK_THROWS_AS(T_perturbed(1.5, 0.9), NegativeRadicand);
}

TEST_CASE("cylinder parabola eta") {
  const CylinderEta e0 = eta_cylinder_parabola(0.0);
  CHECK(e0.eta_tilde == make_vec({0.0, 1.0, 0.0}));
  CHECK(e0.rho == 0.0);
  const CylinderEta e = eta_cylinder_parabola(-0.3);
  CHECK(e.eta_tilde == make_vec({0.6, 1.0, 0.0}));
  CHECK(e.rho == doctest::Approx(0.09).epsilon(1e-15));
  // (x, x^2, h) . eta_tilde + rho = (x - t)^2 for every h
  const CylinderEta e5 = eta_cylinder_parabola(0.5);
  for (double h : {0.0, 1.0, 7.0}) CHECK(make_vec({1.0, 1.0, h}).dot(e5.eta_tilde) + e5.rho == 0.25);
}

TEST_CASE("split eta for cylinders") {
  const CylinderEta a = split_eta_for_cylinder(make_vec({-1.0, 1.0, 0.25}));
  CHECK(a.eta_tilde == make_vec({-1.0, 1.0, 0.0}));
  CHECK(a.rho == 0.25);
  const CylinderEta b = split_eta_for_cylinder(make_vec({0.0, 0.0, 1.0, 0.0}));
  CHECK(b.eta_tilde == make_vec({0.0, 0.0, 1.0, 0.0}));
  CHECK(b.rho == 0.0);
}

TEST_CASE("general eta") {
  const VectorMap id1 = VectorMap::identity(Box::interval(-1, 1));
  CHECK(eta_general(id1, QuadraticSignature(1, 1), make_vec({0.0})) == make_vec({0.0, 1.0, 0.0}));
  CHECK((eta_general(id1, QuadraticSignature(1, 1), make_vec({0.5})) - make_vec({-1.0, 1.0, 0.25})).norm() <= 1e-15);

  const VectorMap id2 = VectorMap::identity(Box::cube(2, 1));
  const Vec e0 = eta_general(id2, QuadraticSignature(2, 1), Vec::Zero(2));
  CHECK(e0 == make_vec({0.0, 0.0, 1.0, 0.0}));
  CHECK(split_eta_for_cylinder(e0).eta_tilde == e0);

  const GraphSurface s = catalog_surface("perturbed_parabola");
  for (double t = -0.3; t <= 0.3; t += 0.01) {
    CHECK((eta_general(*s.varphi, *s.sig, make_vec({t})) - eta_perturbed(t)).norm() <= 1e-12);
  }
}

TEST_CASE("F on the diagonal") {
  const VectorMap id1 = VectorMap::identity(Box::interval(-1, 1));
  const QuadraticSignature q(1, 1);
  for (double x : {-0.4, 0.0, 0.3}) {
    CHECK(F_eval(id1, q, make_vec({x}), make_vec({x})) == 0.0);
    for (double t : {-0.2, 0.1}) {
      CHECK(F_eval(id1, q, make_vec({x}), make_vec({t})) == doctest::Approx((x - t) * (x - t)).epsilon(1e-14));
    }
  }
  const GraphSurface s = catalog_surface("saddle");
  for (const Vec& x : {make_vec({0.1, -0.2}), make_vec({-0.3, 0.05})}) {
    const ValueFn Fx = [&](const Vec& t) { return F_eval(*s.varphi, *s.sig, x, t); };
    CHECK(fd_gradient(Fx, x).norm() <= 1e-7);
    CHECK(std::abs(Fx(x)) <= 1e-15);
  }
}

TEST_CASE("closed-form identities at random points") {
  std::mt19937_64 rng(42);
  for (const std::string id : {"cone_parabola", "cone_perturbed", "cyl_parabola"}) {
    const ReparamFamily fam = make_family(id);
    std::uniform_real_distribution<double> u(fam.cU.lo(0), fam.cU.hi(0));
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const Vec x = make_vec({u(rng)}), t = make_vec({u(rng)});
      const double lhs = fam.sig()(fam.T(t, x));
      double rhs;
      if (fam.kind == FamilyKind::Cone) {
        rhs = lifted_dot(fam, x, t)(0);
      } else {
        const double h = 0.5 + 6.5 * (i % 3) / 2.0;
        rhs = fam.lift(x, h).dot(fam.eta_tilde(t)) + fam.rho(t);
      }
      worst = std::max(worst, std::abs(lhs - rhs));
    }
    CHECK_MESSAGE(worst <= 1e-12, id);
  }
}

TEST_CASE("scale covariance of the cone identity") {
  const ReparamFamily fam = make_family("cone_perturbed");
  const Vec x = make_vec({0.11}), t = make_vec({-0.07});
  for (double h : {0.5, 1.0, 7.0}) {
    CHECK(h * fam.sig()(fam.T(t, x)) == doctest::Approx(fam.lift(x, h).dot(fam.eta(t))).epsilon(1e-12));
  }
}

TEST_CASE("general construction reduces to the shift for the identity chart") {
  const ReparamFamily fam = build_T_general(VectorMap::identity(Box::interval(-1, 1)), QuadraticSignature(1, 1));
  for (double x : {-0.2, 0.0, 0.15}) {
    for (double t : {-0.1, 0.05}) CHECK(fam.T(make_vec({t}), make_vec({x}))(0) == doctest::Approx(x - t).epsilon(1e-9));
  }
}

TEST_CASE("general construction matches the closed-form perturbed T") {
  const ReparamFamily fam = make_family("cone_general:perturbed_parabola");
  CHECK_FALSE(fam.closed_form);
  const double c = fam.c() * 0.5;
  for (double x = -c; x <= c; x += c / 8) {
    for (double t = -c; t <= c; t += c / 4) {
      CHECK(fam.T(make_vec({t}), make_vec({x}))(0) == doctest::Approx(T_perturbed(t, x)).epsilon(1e-6));
    }
  }
}

TEST_CASE("general construction over the saddle") {
  const ReparamFamily fam = make_family("cone_general:saddle");
  CHECK(fam.ambient_dim() == 4);
  const IdentityReport rep = check_identity(fam, 2000, 9, {0.5, 1.0, 7.0});
  CHECK(rep.max_error <= 1e-6);
  CHECK(rep.min_eta_norm >= 1.0 - 1e-12);
  CHECK(rep.max_F_diag <= 1e-12);
  CHECK(rep.eps > 0.0);
  // H_t F_0(0) = H Q(0)
  const ValueFn F0 = [&](const Vec& t) { return fam.F(Vec::Zero(2), t); };
  CHECK((fd_hessian(F0, Vec::Zero(2)) - fam.sig().hessian()).norm() <= 1e-5);
}

TEST_CASE("critical point of F_x is unique away from the diagonal") {
  const ReparamFamily fam = make_family("cone_perturbed");
  const double c = fam.c();
  const int cells = 40;
  const double step = 2 * c / cells;
  for (int i = 0; i <= cells; i += 5) {
    const double x = -c + i * step;
    for (int j = 0; j <= cells; ++j) {
      const double t = -c + j * step;
      if (std::abs(t - x) <= 2 * step) continue;
      const ValueFn Fx = [&](const Vec& tv) { return fam.F(make_vec({x}), tv); };
      CHECK(fd_gradient(Fx, make_vec({t})).norm() > 0.0);
    }
  }
}

TEST_CASE("unknown family") { CHECK_THROWS_AS(make_family("cone_sphere"), ConfigError); }
