#include "conedecay/reparam.hpp"

#include <cmath>
#include <random>

namespace conedecay {

std::string to_string(FamilyKind k) { return k == FamilyKind::Cone ? "cone" : "cylinder"; }

Vec ReparamFamily::eta_tilde(const Vec& t) const { return split_eta_for_cylinder(eta(t)).eta_tilde; }

double ReparamFamily::rho(const Vec& t) const { return split_eta_for_cylinder(eta(t)).rho; }

Vec ReparamFamily::lift(const Vec& x, double h) const {
  const Vec p = chart(x);
  Vec out(p.size() + 1);
  if (kind == FamilyKind::Cone) {
    out << h * p, h;
  } else {
    out << p, h;
  }
  return out;
}

Vec eta_parabola(double t) { return make_vec({-2.0 * t, 1.0, t * t}); }

Vec eta_perturbed(double t) {
  const double q = 1.0 + 3.0 * t * t;
  return make_vec({-2.0 * t / q, 1.0, 2.0 * t * (t + t * t * t) / q - t * t});
}

double T_perturbed(double t, double x) {
  const double d = x - t;
  const double rad = 1.0 - 3.0 * x * x + 4.0 * x * d - d * d;
  if (rad < 0.0) throw NegativeRadicand("T_perturbed: radicand negative, domain too large");
  return d * std::sqrt(rad / (1.0 + 3.0 * t * t));
}

CylinderEta eta_cylinder_parabola(double t) { return {make_vec({-2.0 * t, 1.0, 0.0}), t * t}; }

CylinderEta split_eta_for_cylinder(const Vec& eta) {
  CylinderEta out;
  out.eta_tilde = eta;
  out.eta_tilde(eta.size() - 1) = 0.0;
  out.rho = eta(eta.size() - 1);
  return out;
}

namespace {

constexpr double kSingularDet = 1e-12;

// [J varphi(t)]^{-T} A_m t
Vec dual_solve(const VectorMap& varphi, const QuadraticSignature& sig, const Vec& t) {
  check_dim(t.size(), sig.n, "eta_general: t");
  const Mat j = varphi.jacobian(t);
  Eigen::PartialPivLU<Mat> lu(j.transpose());
  if (std::abs(lu.determinant()) < kSingularDet) throw SingularJacobian("J varphi(t) is singular");
  return lu.solve(sig.hessian() * t);
}

}  // namespace

Vec eta_general(const VectorMap& varphi, const QuadraticSignature& sig, const Vec& t) {
  const Vec v = dual_solve(varphi, sig, t);
  const int n = sig.n;
  Vec eta(n + 2);
  eta.head(n) = -v;
  eta(n) = 1.0;
  eta(n + 1) = varphi(t).dot(v) - sig(t);
  return eta;
}

double F_eval(const VectorMap& varphi, const QuadraticSignature& sig, const Vec& x, const Vec& t) {
  const Vec v = dual_solve(varphi, sig, t);
  return (varphi(t) - varphi(x)).dot(v) + sig(x) - sig(t);
}

FunctionFamily shifted_F_family(const VectorMap& varphi, const QuadraticSignature& sig) {
  FunctionFamily fam;
  fam.n = sig.n;
  fam.p = sig.n;
  fam.fix = [varphi, sig](const Vec& t) {
    const Vec v = dual_solve(varphi, sig, t);
    const Vec pt = varphi(t);
    const double qt = sig(t);
    const Mat a = sig.hessian();
    FixedFamily ff;
    ff.value = [varphi, sig, v, pt, qt, t](const Vec& x) {
      const Vec s = x + t;
      return (pt - varphi(s)).dot(v) + sig(s) - qt;
    };
    ff.hessian = [varphi, v, a, t](const Vec& x) {
      const Vec s = x + t;
      Mat h = a;
      for (int i = 0; i < v.size(); ++i) {
        if (v(i) != 0.0) h -= v(i) * varphi.component_hessian(s, i);
      }
      return h;
    };
    return ff;
  };
  return fam;
}

ReparamFamily build_T_general(const VectorMap& varphi, const QuadraticSignature& sig, FamilyKind kind,
                              const BuildOptions& opts) {
  const int n = sig.n;
  check_dim(varphi.dim(), n, "build_T_general: varphi");
  const Box& U = varphi.domain();
  double u = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) u = std::min({u, -U.lo(i), U.hi(i)});
  if (!(u > 0.0)) throw DomainError("build_T_general: varphi domain must contain 0");

  const FunctionFamily g = shifted_F_family(varphi, sig);
  MorseOptions mopts = opts.morse;
  mopts.max_halvings = 0;  // shrinking is driven by c below
  double c = opts.c_start;
  std::string last;
  for (int attempt = 0; attempt <= opts.max_shrinks; ++attempt, c *= 0.5) {
    // G(., t) is evaluated at x + t with x in 2cU, t in cU.
    if (!(3.0 * c < u)) {
      last = "3c exceeds the varphi domain";
      continue;
    }
    const Box vt = Box::cube(n, 2.0 * c);
    const Box wt = Box::cube(n, c);
    std::shared_ptr<MorseChart> chart;
    try {
      chart = std::make_shared<MorseChart>(normal_form(g, sig, vt, wt, mopts));
    } catch (const BoxTooLarge& e) {
      last = e.what();
      continue;
    }
    // c_tau = sup |tau(x, t)| / |x| over the boxes
    double c_tau = 0.0;
    for (const Vec& t : grid_points(wt, opts.range_samples)) {
      auto s = chart->slice(t);
      for (const Vec& x : grid_points(vt, opts.range_samples)) {
        const double nx = x.lpNorm<Eigen::Infinity>();
        if (nx == 0.0) continue;
        c_tau = std::max(c_tau, s(x).lpNorm<Eigen::Infinity>() / nx);
      }
    }
    if (!(2.0 * c * c_tau < u)) {
      last = "2c c_tau exceeds the varphi domain";
      continue;
    }

    ReparamFamily fam;
    fam.kind = kind;
    fam.chart = SurfaceChart{varphi, sig};
    fam.cU = wt;
    fam.closed_form = false;
    fam.morse = chart;
    fam.eta = [varphi, sig](const Vec& t) { return eta_general(varphi, sig, t); };
    fam.F = [varphi, sig](const Vec& x, const Vec& t) { return F_eval(varphi, sig, x, t); };
    fam.T_at = [chart](const Vec& t) -> PointMap {
      auto s = std::make_shared<MorseChart::Slice>(chart->slice(t));
      return [s, t](const Vec& x) { return (*s)(x - t); };
    };
    return fam;
  }
  throw ShrinkExhausted("build_T_general: no admissible c (" + last + ")");
}

namespace {

ReparamFamily parabola_family(FamilyKind kind) {
  ReparamFamily fam;
  fam.id = kind == FamilyKind::Cone ? "cone_parabola" : "cyl_parabola";
  fam.kind = kind;
  fam.chart = SurfaceChart{VectorMap::identity(Box::interval(-1.0, 1.0)), QuadraticSignature(1, 1)};
  fam.cU = Box::interval(-0.5, 0.5);
  fam.eta = [](const Vec& t) { return eta_parabola(t(0)); };
  fam.T_at = [](const Vec& t) -> PointMap {
    const double s = t(0);
    return [s](const Vec& x) { return make_vec({x(0) - s}); };
  };
  fam.F = [](const Vec& x, const Vec& t) {
    const double d = x(0) - t(0);
    return d * d;
  };
  return fam;
}

ReparamFamily perturbed_family() {
  ReparamFamily fam;
  fam.id = "cone_perturbed";
  fam.kind = FamilyKind::Cone;
  GraphSurface s = catalog_surface("perturbed_parabola");
  fam.chart = SurfaceChart{*s.varphi, QuadraticSignature(1, 1)};
  fam.cU = Box::interval(-0.2, 0.2);
  fam.eta = [](const Vec& t) { return eta_perturbed(t(0)); };
  fam.T_at = [](const Vec& t) -> PointMap {
    const double s = t(0);
    return [s](const Vec& x) { return make_vec({T_perturbed(s, x(0))}); };
  };
  fam.F = [](const Vec& x, const Vec& t) {
    const double a = x(0);
    return make_vec({a + a * a * a, a * a, 1.0}).dot(eta_perturbed(t(0)));
  };
  return fam;
}

}  // namespace

ReparamFamily make_family(const std::string& id) {
  if (id == "cone_parabola") return parabola_family(FamilyKind::Cone);
  if (id == "cyl_parabola") return parabola_family(FamilyKind::Cylinder);
  if (id == "cone_perturbed") return perturbed_family();
  for (const auto& [prefix, kind] :
       {std::pair{std::string("cone_general:"), FamilyKind::Cone},
        std::pair{std::string("cyl_general:"), FamilyKind::Cylinder}}) {
    if (id.rfind(prefix, 0) == 0) {
      GraphSurface s = catalog_surface(id.substr(prefix.size()));
      MorseParametrization mp = morse_parametrize(s);
      ReparamFamily fam = build_T_general(mp.varphi, mp.sig, kind);
      fam.id = id;
      return fam;
    }
  }
  throw ConfigError("unknown family id '" + id + "'");
}

IdentityReport check_identity(const ReparamFamily& fam, std::size_t samples, unsigned long long seed,
                              const std::vector<double>& heights) {
  const int n = fam.n();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&]() {
    Vec p(n);
    for (int i = 0; i < n; ++i) p(i) = fam.cU.lo(i) + unit(rng) * (fam.cU.hi(i) - fam.cU.lo(i));
    return p;
  };
  IdentityReport rep;
  rep.min_eta_norm = std::numeric_limits<double>::infinity();
  double det_min = std::numeric_limits<double>::infinity(), det_max = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const Vec x = draw(), t = draw();
    const double h = heights[s % heights.size()];
    const Vec tx = fam.T(t, x);
    const double q = fam.sig()(tx);
    const Vec eta = fam.eta(t);
    double err;
    if (fam.kind == FamilyKind::Cone) {
      err = std::abs(h * q - fam.lift(x, h).dot(eta));
      rep.min_eta_norm = std::min(rep.min_eta_norm, eta.norm());
    } else {
      const CylinderEta ce = split_eta_for_cylinder(eta);
      err = std::abs(q - fam.lift(x, h).dot(ce.eta_tilde) - ce.rho);
      rep.min_eta_norm = std::min(rep.min_eta_norm, ce.eta_tilde.norm());
    }
    rep.max_error = std::max(rep.max_error, err);
    // F and Hessian checks on a subsample; they use finite differences.
    if (s % 16 == 0) {
      rep.max_F_diag = std::max(rep.max_F_diag, std::abs(fam.F(x, x)));
      auto fx = [&](const Vec& tt) { return fam.F(x, tt); };
      rep.max_grad_diag = std::max(rep.max_grad_diag, fd_gradient(fx, x).lpNorm<Eigen::Infinity>());
      const double det = std::abs(fd_hessian(fx, t, 1e-4).determinant());
      det_min = std::min(det_min, det);
      det_max = std::max(det_max, det);
    }
    ++rep.samples;
  }
  rep.eps = std::min(det_min, det_max > 0 ? 1.0 / det_max : 0.0);
  return rep;
}

}  // namespace conedecay
