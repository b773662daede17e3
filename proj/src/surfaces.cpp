#include "conedecay/surfaces.hpp"

#include <algorithm>
#include <cmath>

namespace conedecay {

QuadraticSignature::QuadraticSignature(int n_, int m_) : n(n_), m(m_) {
  if (n < 1 || n > 3 || m < 0 || m > n) {
    throw DomainError("QuadraticSignature: need 1 <= n <= 3 and 0 <= m <= n");
  }
}

double QuadraticSignature::operator()(const Vec& y) const {
  check_dim(y.size(), n, "quadratic_form");
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += (j < m ? 1.0 : -1.0) * y(j) * y(j);
  return s;
}

Mat QuadraticSignature::hessian() const {
  Mat a = Mat::Zero(n, n);
  for (int j = 0; j < n; ++j) a(j, j) = j < m ? 2.0 : -2.0;
  return a;
}

double quadratic_form(const QuadraticSignature& sig, const Vec& y) { return sig(y); }

Vec fd_gradient(const ValueFn& f, const Vec& y, double step) {
  const int n = static_cast<int>(y.size());
  Vec g(n);
  Vec yp = y, ym = y;
  for (int i = 0; i < n; ++i) {
    yp(i) = y(i) + step;
    ym(i) = y(i) - step;
    const double h2 = yp(i) - ym(i);
    g(i) = (f(yp) - f(ym)) / h2;
    yp(i) = ym(i) = y(i);
  }
  return g;
}

Mat fd_hessian(const ValueFn& f, const Vec& y, double step) {
  const int n = static_cast<int>(y.size());
  Mat h(n, n);
  const double f0 = f(y);
  Vec z = y;
  for (int i = 0; i < n; ++i) {
    z(i) = y(i) + step;
    const double fp = f(z);
    const double hp = z(i) - y(i);
    z(i) = y(i) - step;
    const double fm = f(z);
    const double hm = y(i) - z(i);
    z(i) = y(i);
    h(i, i) = 2.0 * (hm * fp - (hp + hm) * f0 + hp * fm) / (hp * hm * (hp + hm));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (int si = -1; si <= 1; si += 2) {
        for (int sj = -1; sj <= 1; sj += 2) {
          z(i) = y(i) + si * step;
          z(j) = y(j) + sj * step;
          acc += si * sj * f(z);
        }
      }
      z(i) = y(i);
      z(j) = y(j);
      h(i, j) = h(j, i) = acc / (4.0 * step * step);
    }
  }
  return h;
}

ScalarField::ScalarField(Box domain, ValueFn value, GradFn gradient, HessFn hessian)
    : domain_(std::move(domain)),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      hessian_(std::move(hessian)) {
  if (!value_) throw DomainError("ScalarField: value evaluator required");
}

Vec ScalarField::gradient(const Vec& y) const {
  check_dim(y.size(), dim(), "ScalarField::gradient");
  return gradient_ ? gradient_(y) : fd_gradient(value_, y);
}

Mat ScalarField::hessian(const Vec& y) const {
  check_dim(y.size(), dim(), "ScalarField::hessian");
  if (hessian_) return hessian_(y);
  Mat h = fd_hessian(value_, y);
  return 0.5 * (h + h.transpose());
}

ScalarField ScalarField::finite_difference() const { return ScalarField(domain_, value_); }

VectorMap::VectorMap(Box domain, Fn f, JacFn jac, SecondFn second)
    : domain_(std::move(domain)), f_(std::move(f)), jac_(std::move(jac)), second_(std::move(second)) {
  if (!f_) throw DomainError("VectorMap: map evaluator required");
}

VectorMap VectorMap::identity(const Box& domain) {
  const int n = domain.dim();
  return VectorMap(
      domain, [](const Vec& x) { return x; }, [n](const Vec&) { return Mat(Mat::Identity(n, n)); },
      [n](const Vec&, int) { return Mat(Mat::Zero(n, n)); });
}

Mat VectorMap::jacobian(const Vec& x) const {
  if (jac_) return jac_(x);
  const int n = dim();
  Mat j(n, n);
  Vec xp = x, xm = x;
  for (int c = 0; c < n; ++c) {
    xp(c) = x(c) + kGradStep;
    xm(c) = x(c) - kGradStep;
    j.col(c) = (f_(xp) - f_(xm)) / (xp(c) - xm(c));
    xp(c) = xm(c) = x(c);
  }
  return j;
}

Mat VectorMap::component_hessian(const Vec& x, int i) const {
  if (second_) return second_(x, i);
  if (jac_) {
    // difference the analytic Jacobian row
    const int n = dim();
    Mat h(n, n);
    Vec xp = x, xm = x;
    for (int c = 0; c < n; ++c) {
      xp(c) = x(c) + kJacDiffStep;
      xm(c) = x(c) - kJacDiffStep;
      h.col(c) = ((jac_(xp).row(i) - jac_(xm).row(i)) / (xp(c) - xm(c))).transpose();
      xp(c) = xm(c) = x(c);
    }
    return 0.5 * (h + h.transpose());
  }
  Mat h = fd_hessian([this, i](const Vec& z) { return f_(z)(i); }, x);
  return 0.5 * (h + h.transpose());
}

Vec SurfaceChart::operator()(const Vec& x) const {
  Vec v = varphi(x);
  Vec out(v.size() + 1);
  out << v, sig(x);
  return out;
}

Vec cone_chart(const ParamMap& phi, const Vec& x, double h) {
  Vec p = phi(x);
  Vec out(p.size() + 1);
  out << h * p, h;
  return out;
}

Vec cylinder_chart(const ParamMap& phi, const Vec& x, double h) {
  Vec p = phi(x);
  Vec out(p.size() + 1);
  out << p, h;
  return out;
}

bool GraphSurface::normalized(double tol) const {
  Vec z = Vec::Zero(g.dim());
  return std::abs(g(z)) <= tol && g.gradient(z).lpNorm<Eigen::Infinity>() <= std::max(tol, 1e-8);
}

namespace {

GraphSurface make_parabola() {
  Box v = Box::interval(-1.0, 1.0);
  ScalarField g(
      v, [](const Vec& y) { return y(0) * y(0); }, [](const Vec& y) { return make_vec({2.0 * y(0)}); },
      [](const Vec&) { return Mat(Mat::Constant(1, 1, 2.0)); });
  return {"parabola", g, VectorMap::identity(v), QuadraticSignature(1, 1)};
}

// Inverse of s -> s + s^3 (Cardano, single real root).
double inverse_cubic(double y) {
  const double r = std::sqrt(0.25 * y * y + 1.0 / 27.0);
  return std::cbrt(0.5 * y + r) + std::cbrt(0.5 * y - r);
}

// The curve {(s + s^3, s^2)} written as a graph over its first coordinate.
GraphSurface make_perturbed_parabola() {
  Box v = Box::interval(-0.5, 0.5);
  ScalarField g(
      v,
      [](const Vec& y) {
        const double s = inverse_cubic(y(0));
        return s * s;
      },
      [](const Vec& y) {
        const double s = inverse_cubic(y(0));
        return make_vec({2.0 * s / (1.0 + 3.0 * s * s)});
      },
      [](const Vec& y) {
        const double s = inverse_cubic(y(0));
        const double d1 = 1.0 / (1.0 + 3.0 * s * s);
        const double d2 = -6.0 * s * d1 * d1 * d1;
        return Mat(Mat::Constant(1, 1, 2.0 * d1 * d1 + 2.0 * s * d2));
      });
  VectorMap varphi(
      Box::interval(-0.4, 0.4), [](const Vec& x) { return make_vec({x(0) + x(0) * x(0) * x(0)}); },
      [](const Vec& x) { return Mat(Mat::Constant(1, 1, 1.0 + 3.0 * x(0) * x(0))); },
      [](const Vec& x, int) { return Mat(Mat::Constant(1, 1, 6.0 * x(0))); });
  return {"perturbed_parabola", g, varphi, QuadraticSignature(1, 1)};
}

// y^2 + y^3: no closed-form reparametrization is supplied.
GraphSurface make_cubic_graph() {
  Box v = Box::interval(-0.5, 0.5);
  ScalarField g(
      v, [](const Vec& y) { return y(0) * y(0) * (1.0 + y(0)); },
      [](const Vec& y) { return make_vec({2.0 * y(0) + 3.0 * y(0) * y(0)}); },
      [](const Vec& y) { return Mat(Mat::Constant(1, 1, 2.0 + 6.0 * y(0))); });
  return {"cubic_graph", g, std::nullopt, std::nullopt};
}

GraphSurface make_saddle() {
  Box v = Box::cube(2, 1.0);
  ScalarField g(
      v, [](const Vec& y) { return y(0) * y(0) - y(1) * y(1); },
      [](const Vec& y) { return make_vec({2.0 * y(0), -2.0 * y(1)}); },
      [](const Vec&) {
        Mat h = Mat::Zero(2, 2);
        h(0, 0) = 2.0;
        h(1, 1) = -2.0;
        return h;
      });
  return {"saddle", g, VectorMap::identity(v), QuadraticSignature(2, 1)};
}

GraphSurface make_paraboloid() {
  Box v = Box::cube(2, 1.0);
  ScalarField g(
      v, [](const Vec& y) { return y(0) * y(0) + 2.0 * y(1) * y(1); },
      [](const Vec& y) { return make_vec({2.0 * y(0), 4.0 * y(1)}); },
      [](const Vec&) {
        Mat h = Mat::Zero(2, 2);
        h(0, 0) = 2.0;
        h(1, 1) = 4.0;
        return h;
      });
  const double r = 1.0 / std::sqrt(2.0);
  VectorMap varphi(
      Box::cube(2, 1.0), [r](const Vec& x) { return make_vec({x(0), r * x(1)}); },
      [r](const Vec&) {
        Mat j = Mat::Zero(2, 2);
        j(0, 0) = 1.0;
        j(1, 1) = r;
        return j;
      },
      [](const Vec&, int) { return Mat(Mat::Zero(2, 2)); });
  return {"paraboloid", g, varphi, QuadraticSignature(2, 2)};
}

GraphSurface make_sphere_cap() {
  Box v = Box::cube(2, 0.6);
  ScalarField g(
      v, [](const Vec& y) { return 1.0 - std::sqrt(1.0 - y.squaredNorm()); },
      [](const Vec& y) { return Vec(y / std::sqrt(1.0 - y.squaredNorm())); },
      [](const Vec& y) {
        const double w = std::sqrt(1.0 - y.squaredNorm());
        Mat h = Mat::Identity(2, 2) / w + y * y.transpose() / (w * w * w);
        return h;
      });
  // |varphi(x)|^2 = s^2 (2 - s^2) with s = |x|, so g(varphi(x)) = s^2.
  VectorMap varphi(
      Box::cube(2, 0.4), [](const Vec& x) { return Vec(x * std::sqrt(2.0 - x.squaredNorm())); },
      [](const Vec& x) {
        const double q = std::sqrt(2.0 - x.squaredNorm());
        Mat j = q * Mat::Identity(2, 2) - x * x.transpose() / q;
        return j;
      },
      [](const Vec& x, int i) {
        const double q = std::sqrt(2.0 - x.squaredNorm());
        Mat h(2, 2);
        for (int j = 0; j < 2; ++j) {
          for (int k = 0; k < 2; ++k) {
            double v = -(j == i ? x(k) : 0.0) / q - ((k == i ? x(j) : 0.0) + (j == k ? x(i) : 0.0)) / q -
                       x(i) * x(j) * x(k) / (q * q * q);
            h(j, k) = v;
          }
        }
        return h;
      });
  return {"sphere_cap", g, varphi, QuadraticSignature(2, 2)};
}

}  // namespace

GraphSurface catalog_surface(const std::string& id) {
  if (id == "parabola") return make_parabola();
  if (id == "perturbed_parabola") return make_perturbed_parabola();
  if (id == "cubic_graph") return make_cubic_graph();
  if (id == "saddle") return make_saddle();
  if (id == "paraboloid") return make_paraboloid();
  if (id == "sphere_cap") return make_sphere_cap();
  throw ConfigError("unknown surface id '" + id + "'");
}

std::vector<std::string> catalog_surface_ids() {
  return {"parabola", "perturbed_parabola", "cubic_graph", "saddle", "paraboloid", "sphere_cap"};
}

Curvature curvature(const GraphSurface& surface, const Vec& y) {
  Mat h = surface.g.hessian(y);
  if (!h.allFinite()) throw EigenFailure("curvature: non-finite Hessian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw EigenFailure("curvature: eigen-solver failed");
  Curvature c;
  for (int i = 0; i < h.rows(); ++i) c.principal.push_back(es.eigenvalues()(i));
  std::sort(c.principal.begin(), c.principal.end(), std::greater<>());
  c.gaussian = 1.0;
  for (double v : c.principal) c.gaussian *= v;
  return c;
}

}  // namespace conedecay
