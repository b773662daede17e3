#include "conedecay/morse.hpp"
#include "conedecay/reparam.hpp"

#include <cmath>

#include "doctest.h"

using namespace conedecay;

namespace {

FunctionFamily field_family(Box dom, ValueFn f) { return FunctionFamily::from_field(ScalarField(dom, f)); }

// x1^2 (1 + 0.3 t) - x2^2 + x1 x2^2 / 2 + t x1 x2 / 4, one family parameter.
FunctionFamily tilted_saddle() {
  FunctionFamily f;
  f.n = 2;
  f.p = 1;
  f.fix = [](const Vec& t) {
    const double s = t(0);
    FixedFamily ff;
    ff.value = [s](const Vec& x) {
      return x(0) * x(0) * (1.0 + 0.3 * s) - x(1) * x(1) + 0.5 * x(0) * x(1) * x(1) + 0.25 * s * x(0) * x(1);
    };
    return ff;
  };
  return f;
}

}  // namespace

TEST_CASE("signature of simple critical points") {
  CHECK(signature_at(field_family(Box::interval(-1, 1), [](const Vec& x) { return x(0) * x(0); }), Vec(0)) ==
        QuadraticSignature(1, 1));
  CHECK(signature_at(field_family(Box::cube(2, 1), [](const Vec& y) { return y(0) * y(0) - y(1) * y(1); }),
                     Vec(0)) == QuadraticSignature(2, 1));
  CHECK(signature_at(field_family(Box::cube(2, 1), [](const Vec& y) { return -y(0) * y(0) - 3 * y(1) * y(1); }),
                     Vec(0)) == QuadraticSignature(2, 0));
  CHECK_THROWS_AS(
      signature_at(field_family(Box::interval(-1, 1), [](const Vec& x) { return x(0) * x(0) + x(0); }), Vec(0)),
      NotCritical);
  CHECK_THROWS_AS(
      signature_at(field_family(Box::interval(-1, 1), [](const Vec& x) { return std::pow(x(0), 3); }), Vec(0)),
      DegenerateCritical);
}

TEST_CASE("normal form of x^2 is the identity") {
  const FunctionFamily f = field_family(Box::interval(-0.5, 0.5), [](const Vec& x) { return x(0) * x(0); });
  const MorseChart ch = normal_form(f, QuadraticSignature(1, 1), Box::interval(-0.5, 0.5), Box());
  for (double x : {-0.5, -0.2, 0.0, 0.1, 0.5}) CHECK(ch.tau(make_vec({x}), Vec(0))(0) == doctest::Approx(x).epsilon(1e-15));
  CHECK(verify_chart(ch, f, 101).max_residual == 0.0);
}

TEST_CASE("normal form of x^2 + x^3 has the closed form x sqrt(1 + x)") {
  const FunctionFamily f =
      field_family(Box::interval(-0.2, 0.2), [](const Vec& x) { return x(0) * x(0) * (1.0 + x(0)); });
  const MorseChart ch = normal_form(f, QuadraticSignature(1, 1), Box::interval(-0.2, 0.2), Box());
  CHECK(ch.halvings() == 0);
  double worst = 0.0;
  for (const Vec& x : grid_points(ch.valid_box_V(), 401)) {
    worst = std::max(worst, std::abs(ch.tau(x, Vec(0))(0) - x(0) * std::sqrt(1.0 + x(0))));
  }
  CHECK(worst <= 1e-10);
  const ChartReport rep = verify_chart(ch, f, 201);
  CHECK(rep.max_residual <= 1e-10);
  CHECK(rep.min_jacdet >= 1e-8);
  // tau'(0) = 1 since f''(0) = 2
  CHECK(ch.jac_det_at_0() == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("oversized box is rejected") {
  const FunctionFamily f =
      field_family(Box::interval(-2.0, 2.0), [](const Vec& x) { return x(0) * x(0) * (1.0 + x(0)); });
  MorseOptions o;
  o.max_halvings = 0;
  CHECK_THROWS_AS(normal_form(f, QuadraticSignature(1, 1), Box::interval(-2.0, 2.0), Box(), o), BoxTooLarge);
  // with shrinking allowed the box is halved until the sign condition holds
  const MorseChart ch = normal_form(f, QuadraticSignature(1, 1), Box::interval(-2.0, 2.0), Box());
  CHECK(ch.halvings() >= 1);
  CHECK(ch.valid_box_V().hi(0) < 1.0);
}

TEST_CASE("signature mismatch is rejected") {
  const FunctionFamily f = field_family(Box::interval(-1, 1), [](const Vec& x) { return -x(0) * x(0); });
  CHECK_THROWS_AS(normal_form(f, QuadraticSignature(1, 1), Box::interval(-0.5, 0.5), Box()), BoxTooLarge);
}

TEST_CASE("two-parameter family with a saddle") {
  const FunctionFamily f = tilted_saddle();
  const Box V = Box::cube(2, 0.3);
  const Box W = Box::interval(-0.2, 0.2);
  const MorseChart ch = normal_form(f, QuadraticSignature(2, 1), V, W);
  const ChartReport rep = verify_chart(ch, f, 25);
  CHECK(rep.max_residual <= 1e-6);
  CHECK(rep.min_jacdet >= 1e-8);

  for (double t : {-0.2, 0.0, 0.15}) {
    const Vec tv = make_vec({t});
    CHECK(ch.tau(Vec::Zero(2), tv).norm() <= 1e-10);
    // J^T H Q J = H f and |det J|^2 = |det H f| / 4 at the critical point
    const Mat j = ch.jacobian(Vec::Zero(2), tv, 1e-5);
    const Mat hf = f.fix(tv).hess(Vec::Zero(2));
    const Mat lhs = j.transpose() * ch.sig().hessian() * j;
    CHECK((lhs - hf).norm() <= 1e-5 * hf.norm());
    CHECK(j.determinant() * j.determinant() == doctest::Approx(std::abs(hf.determinant()) / 4.0).epsilon(1e-5));
  }
}

TEST_CASE("residual invariant on the shifted family of the perturbed parabola") {
  const GraphSurface s = catalog_surface("perturbed_parabola");
  const FunctionFamily f = shifted_F_family(*s.varphi, *s.sig);
  const MorseChart ch = normal_form(f, QuadraticSignature(1, 1), Box::interval(-0.2, 0.2), Box::interval(-0.2, 0.2));
  const ChartReport rep = verify_chart(ch, f, 41);
  CHECK(rep.max_residual <= 1e-6);
  // at t = 0 the family is Q_1 itself
  for (double x : {-0.1, 0.05, 0.18}) {
    if (ch.valid_box_V().contains(make_vec({x}))) CHECK(ch.tau(make_vec({x}), make_vec({0.0}))(0) == doctest::Approx(x).epsilon(1e-6));
  }
}

TEST_CASE("grid points include the faces") {
  const auto pts = grid_points(Box::cube(2, 1.0), 3);
  REQUIRE(pts.size() == 9);
  CHECK(pts.front() == make_vec({-1.0, -1.0}));
  CHECK(pts.back() == make_vec({1.0, 1.0}));
  CHECK(grid_points(Box(Vec(0), Vec(0)), 5).size() == 1);
}
