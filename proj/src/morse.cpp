#include "conedecay/morse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace conedecay {

namespace {

constexpr double kCriticalTol = 1e-8;
constexpr double kDegenerateTol = 1e-10;
// Relative slack before a negative radicand in the last step is treated as a
// genuine sign change rather than round-off.
constexpr double kRadicandSlack = 1e-9;

struct EigenFrame {
  Mat o;       // columns are eigenvectors, descending eigenvalues
  Vec lambda;
};

EigenFrame eigen_frame(const Mat& h) {
  const int n = static_cast<int>(h.rows());
  if (!h.allFinite()) throw EigenFailure("morse: non-finite Hessian");
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  if (es.info() != Eigen::Success) throw EigenFailure("morse: eigen-solver failed");
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return es.eigenvalues()(a) > es.eigenvalues()(b); });
  EigenFrame fr{Mat(n, n), Vec(n)};
  for (int k = 0; k < n; ++k) {
    Vec v = es.eigenvectors().col(idx[k]);
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-14) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    fr.o.col(k) = v;
    fr.lambda(k) = es.eigenvalues()(idx[k]);
  }
  return fr;
}

double sgn(double v) { return v < 0 ? -1.0 : 1.0; }

}  // namespace

Mat FixedFamily::hess(const Vec& x) const {
  if (hessian) return hessian(x);
  Mat h = fd_hessian(value, x);
  return 0.5 * (h + h.transpose());
}

FunctionFamily FunctionFamily::from_field(const ScalarField& f) {
  FunctionFamily fam;
  fam.n = f.dim();
  fam.p = 0;
  fam.fix = [f](const Vec&) {
    FixedFamily ff;
    ff.value = f.value_fn();
    if (f.analytic_hessian()) ff.hessian = [f](const Vec& x) { return f.hessian(x); };
    return ff;
  };
  return fam;
}

QuadraticSignature signature_at(const FunctionFamily& f, const Vec& t) {
  check_dim(t.size(), f.p, "signature_at: t");
  FixedFamily ff = f.fix(t);
  Vec zero = Vec::Zero(f.n);
  Vec g = ff.grad(zero);
  if (g.lpNorm<Eigen::Infinity>() > kCriticalTol) {
    throw NotCritical("signature_at: |grad f(0,t)| = " + std::to_string(g.norm()));
  }
  Mat h = ff.hess(zero);
  if (std::abs(h.determinant()) < kDegenerateTol) {
    throw DegenerateCritical("signature_at: |det H f(0,t)| below 1e-10");
  }
  EigenFrame fr = eigen_frame(h);
  int m = 0;
  for (int i = 0; i < f.n; ++i) m += fr.lambda(i) > 0 ? 1 : 0;
  return QuadraticSignature(f.n, m);
}

MorseChart::Slice MorseChart::slice(const Vec& t) const {
  check_dim(t.size(), f_->p, "MorseChart::slice: t");
  Slice s;
  s.chart_ = this;
  s.f_ = f_->fix(t);
  const int n = sig_.n;
  EigenFrame fr = eigen_frame(s.f_.hess(Vec::Zero(n)));
  s.o_ = fr.o;
  s.signs_ = Vec(n);
  int positives = 0;
  for (int i = 0; i < n; ++i) {
    s.signs_(i) = sgn(fr.lambda(i));
    positives += fr.lambda(i) > 0 ? 1 : 0;
  }
  if (positives != sig_.m) throw BoxTooLarge("MorseChart: signature changes inside W");
  s.order_.resize(n);
  std::iota(s.order_.begin(), s.order_.end(), 0);
  std::stable_partition(s.order_.begin(), s.order_.end(), [&](int i) { return s.signs_(i) > 0; });
  return s;
}

Mat MorseChart::Slice::remainder_coefficients(const Vec& y) const {
  const int n = static_cast<int>(y.size());
  const Vec x = o_ * y;
  Mat acc = Mat::Zero(n, n);
  const Rule1D& q = chart_->quad_;
  for (std::size_t k = 0; k < q.size(); ++k) {
    const double s = q.nodes[k];
    acc += q.weights[k] * (1.0 - s) * f_.hess(s * x);
  }
  Mat a = o_.transpose() * acc * o_;
  if (!a.allFinite()) throw QuadratureFailure("morse: non-finite remainder coefficients");
  return 0.5 * (a + a.transpose());
}

Vec MorseChart::Slice::operator()(const Vec& x) const {
  const int n = chart_->sig_.n;
  check_dim(x.size(), n, "MorseChart::tau");
  Vec z(n);
  if (n == 1) {
    const double fx = f_.value(x);
    const double r = signs_(0) * fx;
    if (r < -kRadicandSlack * (1.0 + std::abs(fx))) {
      throw BoxTooLarge("MorseChart: sign of the remainder changes");
    }
    z(0) = sgn(x(0) * o_(0, 0)) * std::sqrt(std::max(r, 0.0));
    if (x(0) == 0.0) z(0) = 0.0;
  } else {
    // step 1: complete the square in the rotated frame
    const Vec y = o_.transpose() * x;
    const Mat a = remainder_coefficients(y);
    const double a11 = a(0, 0);
    if (!(signs_(0) * a11 > 0.0)) throw BoxTooLarge("MorseChart: f^(1)_11 changes sign");
    const double z1 = std::sqrt(signs_(0) * a11) * (y(0) + y(1) * a(1, 0) / a11);
    // step 2: f - s_1 z_1^2 = (a22 - a12^2 / a11) y_2^2
    const double r = signs_(1) * (a(1, 1) - a(1, 0) * a(1, 0) / a11);
    if (!(r > 0.0)) throw BoxTooLarge("MorseChart: sign of the last remainder changes");
    const double z2 = std::sqrt(r) * y(1);
    Vec raw(2);
    raw << z1, z2;
    for (int i = 0; i < n; ++i) z(i) = raw(order_[i]);
  }
  return z;
}

Mat MorseChart::jacobian(const Vec& x, const Vec& t, double step) const {
  Slice s = slice(t);
  const int n = sig_.n;
  Mat j(n, n);
  Vec xp = x, xm = x;
  for (int c = 0; c < n; ++c) {
    xp(c) = x(c) + step;
    xm(c) = x(c) - step;
    j.col(c) = (s(xp) - s(xm)) / (xp(c) - xm(c));
    xp(c) = xm(c) = x(c);
  }
  return j;
}

std::vector<Vec> grid_points(const Box& box, int per_dim) {
  const int d = box.dim();
  std::vector<Vec> pts;
  if (d == 0) {
    pts.emplace_back(Vec(0));
    return pts;
  }
  long total = 1;
  for (int i = 0; i < d; ++i) total *= per_dim;
  pts.reserve(total);
  for (long idx = 0; idx < total; ++idx) {
    Vec p(d);
    long r = idx;
    for (int i = 0; i < d; ++i) {
      const int k = static_cast<int>(r % per_dim);
      r /= per_dim;
      const double u = per_dim == 1 ? 0.5 : static_cast<double>(k) / (per_dim - 1);
      p(i) = box.lo(i) + u * (box.hi(i) - box.lo(i));
    }
    pts.push_back(p);
  }
  return pts;
}

namespace {

// Returns an empty string when the boxes pass, otherwise the reason.
std::string sweep(const MorseChart& chart, const MorseOptions& opts) {
  const auto xs = grid_points(chart.valid_box_V(), opts.samples_x);
  const auto ts = grid_points(chart.valid_box_W(), opts.samples_t);
  const double step = opts.jac_step * std::max(1.0, chart.valid_box_V().half_widths().maxCoeff());
  try {
    for (const Vec& t : ts) {
      auto s = chart.slice(t);
      for (const Vec& x : xs) {
        (void)s(x);
        const double det = chart.jacobian(x, t, step).determinant();
        if (!(std::abs(det) >= opts.min_jac_det)) return "Jacobian determinant below threshold";
      }
    }
  } catch (const BoxTooLarge& e) {
    return e.what();
  } catch (const QuadratureFailure& e) {
    return e.what();
  }
  return {};
}

}  // namespace

MorseChart normal_form(const FunctionFamily& f, const QuadraticSignature& sig, const Box& V, const Box& W,
                       const MorseOptions& opts) {
  if (f.n < 1 || f.n > 2) throw DomainError("normal_form: only n in {1, 2} is supported");
  check_dim(sig.n, f.n, "normal_form: signature");
  check_dim(V.dim(), f.n, "normal_form: V");
  check_dim(W.dim(), f.p, "normal_form: W");
  if (!V.contains(Vec::Zero(f.n))) throw DomainError("normal_form: V must contain 0");

  // The signature must agree with the one requested on all of W.
  for (const Vec& t : grid_points(W, opts.samples_t)) {
    QuadraticSignature s = signature_at(f, t);
    if (s.m != sig.m) throw BoxTooLarge("normal_form: signature differs from the requested one on W");
  }

  MorseChart chart;
  chart.f_ = std::make_shared<const FunctionFamily>(f);
  chart.sig_ = sig;
  chart.quad_ = gauss_legendre(opts.quad_nodes, 0.0, 1.0);
  chart.v_ = V;
  chart.w_ = W;
  std::string reason;
  for (int h = 0; h <= opts.max_halvings; ++h) {
    chart.halvings_ = h;
    reason = sweep(chart, opts);
    if (reason.empty()) {
      const Vec t0 = W.dim() ? chart.w_.center() : Vec(0);
      chart.jac_det0_ = chart.jacobian(Vec::Zero(f.n), t0, 1e-4).determinant();
      return chart;
    }
    chart.v_ = chart.v_.scaled(0.5);
    chart.w_ = W.dim() ? chart.w_.scaled(0.5) : chart.w_;
  }
  throw BoxTooLarge("normal_form: conditions still fail after " + std::to_string(opts.max_halvings) +
                    " halvings (" + reason + ")");
}

ChartReport verify_chart(const MorseChart& chart, const FunctionFamily& f, int samples_per_dim,
                         std::optional<Box> V, std::optional<Box> W) {
  const Box vb = V ? *V : chart.valid_box_V();
  const Box wb = W ? *W : chart.valid_box_W();
  ChartReport rep;
  rep.min_jacdet = std::numeric_limits<double>::infinity();
  const double step = 1e-5 * std::max(1.0, vb.half_widths().maxCoeff());
  for (const Vec& t : grid_points(wb, std::max(2, samples_per_dim / 2 + 1))) {
    auto s = chart.slice(t);
    FixedFamily ff = f.fix(t);
    for (const Vec& x : grid_points(vb, samples_per_dim)) {
      const double fx = ff.value(x);
      const double res = std::abs(fx - chart.sig()(s(x)));
      rep.max_residual = std::max(rep.max_residual, res);
      rep.min_jacdet = std::min(rep.min_jacdet, std::abs(chart.jacobian(x, t, step).determinant()));
      ++rep.samples;
    }
  }
  return rep;
}

}  // namespace conedecay
