#include "conedecay/surfaces.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace conedecay;

TEST_CASE("quadratic form values") {
  CHECK(quadratic_form(QuadraticSignature(1, 1), make_vec({0.5})) == doctest::Approx(0.25));
  CHECK(quadratic_form(QuadraticSignature(2, 1), make_vec({1.0, 1.0})) == 0.0);
  CHECK(quadratic_form(QuadraticSignature(3, 2), make_vec({1.0, 2.0, 3.0})) == -4.0);
  CHECK_THROWS_AS(quadratic_form(QuadraticSignature(2, 1), make_vec({1.0})), DimensionMismatch);
}

TEST_CASE("quadratic signature hessian") {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 0; m <= n; ++m) {
      const QuadraticSignature s(n, m);
      const Mat h = s.hessian();
      for (int i = 0; i < n; ++i) CHECK(h(i, i) == (i < m ? 2.0 : -2.0));
      CHECK(s(Vec::Zero(n)) == 0.0);
    }
  }
}

TEST_CASE("curvature of catalog graphs") {
  const Curvature p = curvature(catalog_surface("parabola"), Vec::Zero(1));
  REQUIRE(p.principal.size() == 1);
  CHECK(p.principal[0] == doctest::Approx(2.0));
  CHECK(p.gaussian == doctest::Approx(2.0));

  const Curvature s = curvature(catalog_surface("saddle"), Vec::Zero(2));
  CHECK(s.principal[0] == doctest::Approx(2.0));
  CHECK(s.principal[1] == doctest::Approx(-2.0));
  CHECK(s.gaussian == doctest::Approx(-4.0));

  // g = x^2 + x^3, second derivative 2 + 6x
  const double x = 0.1;
  const Curvature c = curvature(catalog_surface("cubic_graph"), make_vec({x}));
  CHECK(c.gaussian == doctest::Approx(2.0 + 6.0 * x).epsilon(1e-12));
}

TEST_CASE("curvature under coordinate swap") {
  const GraphSurface base = catalog_surface("paraboloid");
  GraphSurface swapped = base;
  swapped.g = ScalarField(base.g.domain(), [g = base.g](const Vec& y) { return g(make_vec({y(1), y(0)})); });
  const Curvature a = curvature(base, Vec::Zero(2));
  const Curvature b = curvature(swapped, Vec::Zero(2));
  CHECK(a.principal[0] == doctest::Approx(4.0));
  CHECK(a.principal[1] == doctest::Approx(2.0));
  CHECK(b.principal[0] == doctest::Approx(a.principal[0]).epsilon(1e-6));
  CHECK(b.principal[1] == doctest::Approx(a.principal[1]).epsilon(1e-6));
  CHECK(b.gaussian == doctest::Approx(a.gaussian).epsilon(1e-6));
}

TEST_CASE("cone and cylinder charts") {
  const ParamMap parabola = [](const Vec& x) { return make_vec({x(0), x(0) * x(0)}); };
  const ParamMap cubic = [](const Vec& x) { return make_vec({x(0) + x(0) * x(0) * x(0), x(0) * x(0)}); };
  CHECK(cone_chart(parabola, make_vec({1.0}), 2.0) == make_vec({2.0, 2.0, 2.0}));
  CHECK(cone_chart(cubic, make_vec({0.3}), 0.0) == Vec::Zero(3));
  CHECK(cone_chart(cubic, make_vec({0.5}), 1.0) == make_vec({0.625, 0.25, 1.0}));
  CHECK(cylinder_chart(parabola, make_vec({1.0}), 3.0) == make_vec({1.0, 1.0, 3.0}));
  CHECK(cylinder_chart(parabola, make_vec({0.0}), 0.0) == Vec::Zero(3));
  CHECK(cylinder_chart(parabola, make_vec({-2.0}), 1.0) == make_vec({-2.0, 4.0, 1.0}));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Vec x = make_vec({u(rng)});
    CHECK(cone_chart(cubic, x, 1.0).head(2) == cubic(x));
  }
}

TEST_CASE("finite differences agree with analytic derivatives on the catalog") {
  std::mt19937_64 rng(11);
  for (const std::string& id : catalog_surface_ids()) {
    const GraphSurface s = catalog_surface(id);
    CHECK(s.normalized());
    const ScalarField fd = s.g.finite_difference();
    CHECK_FALSE(fd.analytic_hessian());
    const Box inner = s.g.domain().scaled(0.8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      Vec y(s.param_dim());
      for (int i = 0; i < y.size(); ++i) y(i) = inner.lo(i) + u(rng) * (inner.hi(i) - inner.lo(i));
      CHECK((fd.gradient(y) - s.g.gradient(y)).lpNorm<Eigen::Infinity>() <= 1e-6);
      const Mat h = fd.hessian(y);
      CHECK((h - s.g.hessian(y)).lpNorm<Eigen::Infinity>() <= 1e-6);
      CHECK((h - h.transpose()).lpNorm<Eigen::Infinity>() <= 1e-10 * (1.0 + h.norm()));
    }
  }
}

TEST_CASE("morse parametrization of catalog graphs") {
  SUBCASE("parabola is already in normal form") {
    const MorseParametrization mp = morse_parametrize(catalog_surface("parabola"));
    CHECK(mp.sig == QuadraticSignature(1, 1));
    CHECK(mp.varphi(make_vec({0.37}))(0) == 0.37);
  }
  SUBCASE("saddle") {
    const MorseParametrization mp = morse_parametrize(catalog_surface("saddle"));
    CHECK(mp.sig == QuadraticSignature(2, 1));
    CHECK(mp.varphi(make_vec({0.2, -0.3})) == make_vec({0.2, -0.3}));
  }
  SUBCASE("cubic graph through the numeric path") {
    const GraphSurface s = catalog_surface("cubic_graph");
    const MorseParametrization mp = morse_parametrize(s);
    CHECK_FALSE(mp.closed_form);
    CHECK(mp.sig == QuadraticSignature(1, 1));
    CHECK(mp.varphi.jacobian(Vec::Zero(1))(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    // g(varphi(x)) = Q_1(x) on half the domain
    const Box half = mp.varphi.domain().scaled(0.5);
    double worst = 0.0;
    for (const double x : {-1.0, -0.5, -0.1, 0.0, 0.2, 0.7, 1.0}) {
      const Vec p = make_vec({x * half.hi(0)});
      worst = std::max(worst, std::abs(s.g(mp.varphi(p)) - p(0) * p(0)));
    }
    CHECK(worst <= 1e-8);
  }
  SUBCASE("sphere cap closed form matches the numeric one") {
    const GraphSurface s = catalog_surface("sphere_cap");
    const MorseParametrization a = morse_parametrize(s);
    CHECK(a.closed_form);
    CHECK(a.sig == QuadraticSignature(2, 2));
    const Vec x = make_vec({0.1, -0.15});
    CHECK(s.g(a.varphi(x)) == doctest::Approx(x.squaredNorm()).epsilon(1e-13));
  }
}
