#include "conedecay/harness.hpp"

#include "conedecay/measures.hpp"
#include "conedecay/reparam.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

namespace conedecay::harness {

namespace {

constexpr double kPi = std::numbers::pi;
// Streamed averaged measures stop growing at this many (node, atom) pairs.
constexpr double kStreamCap = 1e9;

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int panels_for(double cycles, double cycles_per_panel) {
  return std::max(4, static_cast<int>(std::ceil(cycles / cycles_per_panel)));
}

// Unit conormal of the cone (or cylinder) over the graph of g along the
// generator through y0.
Vec conormal(const GraphSurface& s, const Vec& y0, bool cone) {
  const int n = s.param_dim();
  const Vec grad = s.g.gradient(y0);
  Vec eta(n + 2);
  eta.head(n) = -grad;
  eta(n) = 1.0;
  eta(n + 1) = cone ? grad.dot(y0) - s.g(y0) : 0.0;
  return eta.normalized();
}

std::vector<Vec> base_points(int n, int count, double half, unsigned long long seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  std::vector<Vec> pts;
  if (n == 1) {
    for (int i = 0; i < count; ++i) pts.push_back(make_vec({-half + 2.0 * half * (i + 0.5 + jitter(rng)) / count}));
    return pts;
  }
  // sunflower layout in the disc of radius `half`
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double r = half * std::sqrt((i + 0.5) / count);
    const double a = golden * i + jitter(rng);
    Vec p = Vec::Zero(n);
    p(0) = r * std::cos(a);
    p(1) = r * std::sin(a);
    pts.push_back(p);
  }
  return pts;
}

std::vector<Vec> near_axis_directions(int ambient) {
  std::vector<Vec> dirs;
  Vec axis = Vec::Zero(ambient);
  axis(ambient - 1) = 1.0;
  dirs.push_back(axis);
  for (double tilt : {0.05, 0.1}) {
    for (int j = 0; j < ambient - 1; ++j) {
      for (double sgn : {1.0, -1.0}) {
        Vec e = std::cos(tilt) * axis;
        e(j) = sgn * std::sin(tilt);
        dirs.push_back(e);
      }
    }
  }
  return dirs;
}

void record(VerificationReport& r, const ScenarioConfig& cfg, const DecayProfile& p, const std::string& name) {
  save_profile(cfg, p, cfg.scenario + "_" + name);
  r.add_fit({cfg.scenario, name, p.mode, p.fit});
}

}  // namespace

VerificationReport run_lower(const ScenarioConfig& cfg) {
  cfg.validate();
  Timer total;
  VerificationReport r;
  const std::string pre = cfg.scenario + ".";
  const bool cone = cfg.scenario == "lower_cone";
  const GraphSurface s = catalog_surface(cfg.surface);
  const int n = s.param_dim();
  const int ambient = n + 2;
  const double R = cfg.radius;
  const Box pbox = Box::cube(n, R);
  if (!pbox.strictly_inside(s.g.domain())) throw ConfigError("radius exceeds the surface domain");

  // Phase cycles across the parameter box and the height range at k_max.
  double gmax = 0.0, ymax = 0.0;
  for (const Vec& y : grid_points(pbox, n == 1 ? 65 : 17)) {
    gmax = std::max(gmax, s.g.gradient(y).norm());
    ymax = std::max(ymax, std::sqrt(y.squaredNorm() + s.g(y) * s.g(y) + 1.0));
  }
  int nx = cfg.nodes_x, nh = cfg.nodes_h;
  if (nx == 0) nx = 16 * panels_for(cfg.k_max * 2.0 * std::sqrt(1.0 + gmax * gmax) * 2.0 * R, 3.0);
  if (nh == 0) nh = 16 * panels_for(cfg.k_max * ymax, 3.0);
  const double atoms = std::pow(static_cast<double>(nx), n) * nh;
  if (atoms > static_cast<double>(kMaterializeCap)) {
    const double f = std::pow(static_cast<double>(kMaterializeCap) / atoms, 1.0 / (n + 1));
    nx = std::max(16, static_cast<int>(nx * f) / 16 * 16);
    nh = std::max(16, static_cast<int>(nh * f) / 16 * 16);
    r.warn(pre + "resolution", "node counts reduced to " + std::to_string(nx) + " x " + std::to_string(nh) +
                                   " to stay under the atom cap; k_max is beyond what they resolve");
  }

  const auto graph = [&s, n](const Vec& y) {
    Vec p(n + 1);
    p << y, s.g(y);
    return p;
  };
  const ParticleMeasure mu_s = surface_measure(graph, pbox, centered_bump(Vec::Zero(n), 0.5 * R, R), nx);
  const BumpFunction psi_h = make_bump(Box::interval(1.25, 1.75), Box::interval(1.0, 2.0));
  const ParticleMeasure nu = cone ? cone_lower_measure(mu_s, psi_h, nh) : cylinder_lower_measure(mu_s, psi_h, nh);
  r.check_le(pre + "mass", std::abs(nu.total_mass() - 1.0), 1e-12, 0.0,
             std::to_string(nu.size()) + " atoms (" + std::to_string(nx) + " x-nodes, " + std::to_string(nh) +
                 " h-nodes)");

  {
    double err = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, nu.size() / 4096);
    for (std::size_t i = 0; i < nu.size(); i += stride) {
      const Vec par = nu.params(i);
      const double h = par(n);
      const Vec y = graph(par.head(n));
      Vec want(ambient);
      if (cone) {
        want << h * y, h;
      } else {
        want << y, h;
      }
      err = std::max(err, (nu.position(i) - want).cwiseAbs().maxCoeff());
    }
    r.check_le(pre + "support_on_surface", err, 1e-14);
  }

  if (!cone) {
    // nu^(D) at (xi', 0) against mu^(S)(xi')
    double err = 0.0;
    for (double k : {cfg.k_min, std::sqrt(cfg.k_min * cfg.k_max), cfg.k_max}) {
      for (const Vec& y0 : base_points(n, 3, 0.4 * R, cfg.seed)) {
        const Vec eta = conormal(s, y0, false);
        err = std::max(err, std::abs(ft(nu, k * eta) - ft(mu_s, k * eta.head(n + 1))));
      }
    }
    r.check_le(pre + "separability", err, 1e-12);
  }

  bool guard = false;
  double gen_lo = std::numeric_limits<double>::infinity(), gen_hi = -gen_lo;
  {
    Timer t;
    const auto pts = base_points(n, cfg.directions, 0.4 * R, cfg.seed);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec eta = conormal(s, pts[i], cone);
      DecayProfile p = ray_profile(nu, eta, cfg.k_min, cfg.k_max, cfg.points_per_octave, Envelope::BlockMax);
      p.direction = "conormal_" + std::to_string(i);
      guard = guard || !p.warnings.empty();
      gen_lo = std::min(gen_lo, p.fit.exponent);
      gen_hi = std::max(gen_hi, p.fit.exponent);
      record(r, cfg, p, p.direction);
    }
    r.check_ge(pre + "generic.exponent_min", gen_lo, cfg.generic_min, t.seconds(),
               std::to_string(pts.size()) + " conormal directions, blockmax");
    r.check_le(pre + "generic.exponent_max", gen_hi, cfg.generic_max);
  }
  {
    Timer t;
    double ax = std::numeric_limits<double>::infinity();
    const auto dirs = near_axis_directions(ambient);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      DecayProfile p = ray_profile(nu, dirs[i], cfg.k_min, cfg.k_max, cfg.points_per_octave, Envelope::BlockMax);
      p.direction = "axis_" + std::to_string(i);
      guard = guard || !p.warnings.empty();
      ax = std::min(ax, p.fit.exponent);
      record(r, cfg, p, p.direction);
    }
    r.check_ge(pre + "axis.exponent_min", ax, cfg.axis_min, t.seconds(),
               std::to_string(dirs.size()) + " directions within 0.1 rad of the axis, blockmax");
  }
  {
    Vec e = Vec::Zero(n + 1);
    e(n) = 1.0;
    DecayProfile p = ray_profile(mu_s, e, cfg.k_min, cfg.k_max, cfg.points_per_octave, Envelope::BlockMax);
    p.direction = "surface_normal";
    record(r, cfg, p, p.direction);
    r.check_within(pre + "surface_measure.exponent", p.fit.exponent, 0.5 * n - cfg.exponent_tol,
                   0.5 * n + cfg.exponent_tol, 0.0, "mu^(S) along the normal at the centre, blockmax");
  }
  if (guard) r.warn(pre + "resolution_guard", "atom count below 10 k_max diameter for some profile");
  r.check_le(pre + "runtime_s", total.seconds(), 300.0);
  return r;
}

VerificationReport run_upper(const ScenarioConfig& cfg) {
  cfg.validate();
  Timer total;
  VerificationReport r;
  const std::string pre = cfg.scenario + ".";
  const ReparamFamily fam = make_family(cfg.family);
  const bool cone = fam.kind == FamilyKind::Cone;
  const int n = fam.n();
  const int d = n + 1;
  const int ambient = n + 2;
  const double c = fam.c();

  // mu on Phi(cU / 2 x [1, 2])
  const Box xbox = fam.cU.scaled(0.5);
  const Box pbox = xbox.product(Box::interval(1.0, 2.0));
  const BumpFunction density(Box::cube(n, 0.25 * c).product(Box::interval(1.25, 1.75)), pbox);
  std::vector<int> nodes(n, cfg.nodes_x);
  nodes.push_back(cfg.nodes_h);
  const ParticleMeasure mu = surface_measure([&fam, n](const Vec& p) { return fam.lift(p.head(n), p(n)); }, pbox,
                                             density, nodes);

  // t-rule: enough 16-node panels for the phase k h F(x, t) at k_max
  double frange = 0.0;
  for (const Vec& x : grid_points(xbox, 5)) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec& t : grid_points(fam.cU, n == 1 ? 65 : 17)) {
      const double v = fam.F(x, t);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    frange = std::max(frange, hi - lo);
  }
  const double cycles = cfg.k_max * (cone ? 2.0 : 1.0) * frange;
  const int need = 16 * panels_for(cycles, cfg.t_cycles_per_panel);
  int nt = cfg.nodes_t > 0 ? cfg.nodes_t : need;
  if (std::pow(static_cast<double>(nt), n) * mu.size() > kStreamCap) {
    nt = static_cast<int>(std::pow(kStreamCap / mu.size(), 1.0 / n)) / 16 * 16;
  }
  if (nt < need) {
    r.warn(pre + "resolution", std::to_string(nt) + " t-nodes per dimension, " + std::to_string(need) +
                                   " needed to resolve k_max = " + std::to_string(cfg.k_max));
  }
  const BumpFunction psi_t = make_bump(fam.cU.scaled(0.5), fam.cU);
  const AveragedMeasure nu(fam, mu, t_nodes(psi_t, std::vector<int>(n, nt)));
  const std::string sizes = std::to_string(mu.size()) + " atoms x " + std::to_string(nu.nodes().size()) +
                            " t-nodes, c = " + std::to_string(c);
  r.check_le(pre + "mass", std::abs(nu.mass() - mu.total_mass() * nu.coef_sum()) / nu.mass(), 1e-12, 0.0, sizes);

  Vec ed = Vec::Zero(ambient);
  ed(d - 1) = 1.0;

  // (a) particle-level Fubini on a subset of t-nodes
  {
    Timer t;
    std::vector<TNode> sub;
    const std::size_t stride = std::max<std::size_t>(1, nu.nodes().size() / 64);
    for (std::size_t i = stride / 2; i < nu.nodes().size(); i += stride) sub.push_back(nu.nodes()[i]);
    const AveragedMeasure small(fam, mu, sub);
    const ParticleMeasure mat = small.materialize();
    std::vector<Vec> xis;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g;
    for (double k : {cfg.k_min, std::sqrt(cfg.k_min * cfg.k_max), cfg.k_max}) {
      xis.push_back(k * ed);
      Vec e(ambient);
      for (int j = 0; j < ambient; ++j) e(j) = g(rng);
      xis.push_back(k * e.normalized());
    }
    const auto streamed = small.ft_fubini(xis);
    double err = 0.0;
    for (std::size_t i = 0; i < xis.size(); ++i) err = std::max(err, std::abs(ft(mat, xis[i]) - streamed[i]));
    r.check_le(pre + "fubini", err / mat.total_mass(), 1e-12, t.seconds(),
               "relative to the mass, " + std::to_string(sub.size()) + " t-nodes");
  }

  // (b) pullback nu_t^(k e_d) = phase * mu^(k eta(t))
  {
    Timer t;
    const double kcap = fam.closed_form ? cfg.k_max : std::min(cfg.k_max, cfg.pullback_k_max);
    std::vector<double> ks;
    for (double k : geometric_grid(cfg.k_min, cfg.k_max, 2)) {
      if (k <= kcap) ks.push_back(k);
    }
    double residual = 0.0;
    if (!fam.closed_form) residual = check_identity(fam, 1000, cfg.seed).max_error;
    double err = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, nu.nodes().size() / 8);
    for (std::size_t i = stride / 2; i < nu.nodes().size(); i += stride) {
      const Vec& tv = nu.nodes()[i].t;
      const ParticleMeasure nut = nu.pushforward_at(i);
      for (double k : ks) {
        cplx want;
        if (cone) {
          want = ft(mu, k * fam.eta(tv));
        } else {
          want = std::exp(cplx(0.0, -2.0 * kPi * k * fam.rho(tv))) * ft(mu, k * fam.eta_tilde(tv));
        }
        err = std::max(err, std::abs(ft(nut, k * ed) - want));
      }
    }
    const double tol = fam.closed_form ? 1e-12 : 1e-6 * (1.0 + kcap * residual);
    r.check_le(pre + "pullback", err / mu.total_mass(), tol, t.seconds(),
               "k <= " + std::to_string(kcap) + (fam.closed_form ? "" : ", identity residual " + std::to_string(residual)));
  }

  // (c), (d) raw decay of |nu^(k e_d)|
  {
    Timer t;
    const auto ks = geometric_grid(cfg.k_min, cfg.k_max, cfg.points_per_octave);
    std::vector<Vec> xis;
    for (double k : ks) xis.push_back(k * ed);
    const auto vals = nu.ft_fubini(xis);
    std::vector<double> mags;
    for (const cplx& v : vals) mags.push_back(std::abs(v));
    DecayProfile p = make_profile(ks, mags, cfg.points_per_octave, Envelope::Raw, "e_d", ed);
    record(r, cfg, p, "e_d");
    const double want = 0.5 * (d - 1);
    double floor = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ks.size(); ++i) floor = std::min(floor, std::pow(ks[i], want) * mags[i]);
    r.check_within(pre + "exponent", p.fit.exponent, want - cfg.exponent_tol, want + cfg.exponent_tol, t.seconds(),
                   "raw fit, r2 = " + std::to_string(p.fit.r2));
    r.check_ge(pre + "floor", floor, cfg.floor_min, 0.0, "min_k k^{(d-1)/2} |nu^(k e_d)|");
    r.check_le(pre + "s_upper", 2.0 * p.fit.exponent, d - 1 + cfg.s_margin);
  }
  r.check_le(pre + "runtime_s", total.seconds(), cfg.d3 ? 1800.0 : 600.0);
  return r;
}

}  // namespace conedecay::harness
