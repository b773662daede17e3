#include "conedecay/morse.hpp"
#include "conedecay/surfaces.hpp"

#include <cmath>
#include <memory>

namespace conedecay {

namespace {

Mat fd_jacobian(const MorseChart& chart, const Vec& y) {
  return chart.jacobian(y, Vec(0), 1e-6);
}

}  // namespace

MorseParametrization morse_parametrize(const GraphSurface& surface, ParametrizeMode mode) {
  const int n = surface.param_dim();
  const Vec zero = Vec::Zero(n);
  if (!surface.normalized()) throw DomainError("morse_parametrize: g(0) and grad g(0) must vanish");
  const Mat h0 = surface.g.hessian(zero);
  if (std::abs(h0.determinant()) < 1e-10) throw DegenerateCritical("morse_parametrize: det H g(0) vanishes");

  if (mode == ParametrizeMode::Auto && surface.varphi && surface.sig) {
    return {*surface.varphi, *surface.sig, true};
  }

  FunctionFamily fam = FunctionFamily::from_field(surface.g);
  QuadraticSignature sig = signature_at(fam, Vec(0));
  // Largest centered cube inside the graph domain.
  const Box& dom = surface.g.domain();
  double r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) r = std::min({r, -dom.lo(i), dom.hi(i)});
  auto chart = std::make_shared<MorseChart>(normal_form(fam, sig, Box::cube(n, 0.95 * r), Box(Vec(0), Vec(0))));

  // A cube that tau(V) is guaranteed to cover: tau is a homeomorphism fixing
  // 0, so the image contains every point closer than tau(boundary).
  const Box& v = chart->valid_box_V();
  double u = std::numeric_limits<double>::infinity();
  const int per = n == 1 ? 2 : 81;
  for (const Vec& y : grid_points(v, per)) {
    bool face = false;
    for (int i = 0; i < n; ++i) face = face || y(i) == v.lo(i) || y(i) == v.hi(i);
    if (face) u = std::min(u, chart->tau(y, Vec(0)).lpNorm<Eigen::Infinity>());
  }
  const Box U = Box::cube(n, 0.9 * u);

  const Mat j0inv = fd_jacobian(*chart, zero).inverse();
  auto inverse = [chart, j0inv, v](const Vec& x) -> Vec {
    Vec y = j0inv * x;
    for (int it = 0; it < 60; ++it) {
      const Vec res = chart->tau(y, Vec(0)) - x;
      const Vec dy = fd_jacobian(*chart, y).partialPivLu().solve(res);
      double step = 1.0;
      Vec next = y - dy;
      while (!v.contains(next) && step > 1e-3) {
        step *= 0.5;
        next = y - step * dy;
      }
      y = next;
      if (dy.lpNorm<Eigen::Infinity>() <= 1e-15 * (1.0 + y.lpNorm<Eigen::Infinity>())) break;
    }
    const double err = (chart->tau(y, Vec(0)) - x).lpNorm<Eigen::Infinity>();
    if (!(err <= 1e-12 * (1.0 + x.lpNorm<Eigen::Infinity>()))) {
      throw DomainError("morse_parametrize: Newton inversion of tau did not converge");
    }
    return y;
  };
  VectorMap varphi(U, inverse, [chart, inverse](const Vec& x) -> Mat {
    return fd_jacobian(*chart, inverse(x)).inverse();
  });
  return {varphi, sig, false};
}

}  // namespace conedecay
