#include "conedecay/measures.hpp"

#include "conedecay/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace conedecay {

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = 1.0 / u - 1.0 / (1.0 - u);
  if (a > 700.0) return 0.0;
  return 1.0 / (1.0 + std::exp(a));
}

double smooth_step_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double s = smooth_step(u);
  return s * (1.0 - s) * (1.0 / (u * u) + 1.0 / ((1.0 - u) * (1.0 - u)));
}

BumpFunction::BumpFunction(Box inner, Box outer) : inner_(std::move(inner)), outer_(std::move(outer)) {
  if (!inner_.strictly_inside(outer_)) throw NotNested("make_bump: inner box must lie strictly inside outer");
  if (inner_.degenerate()) throw NotNested("make_bump: inner box is degenerate");
}

double BumpFunction::factor(int i, double y) const {
  const double olo = outer_.lo(i), ohi = outer_.hi(i), ilo = inner_.lo(i), ihi = inner_.hi(i);
  if (y <= olo || y >= ohi) return 0.0;
  if (y < ilo) return smooth_step((y - olo) / (ilo - olo));
  if (y > ihi) return smooth_step((ohi - y) / (ohi - ihi));
  return 1.0;
}

double BumpFunction::factor_derivative(int i, double y) const {
  const double olo = outer_.lo(i), ohi = outer_.hi(i), ilo = inner_.lo(i), ihi = inner_.hi(i);
  if (y <= olo || y >= ohi) return 0.0;
  if (y < ilo) return smooth_step_derivative((y - olo) / (ilo - olo)) / (ilo - olo);
  if (y > ihi) return -smooth_step_derivative((ohi - y) / (ohi - ihi)) / (ohi - ihi);
  return 0.0;
}

double BumpFunction::value(const Vec& y) const {
  check_dim(y.size(), dim(), "BumpFunction");
  double v = 1.0;
  for (int i = 0; i < dim() && v != 0.0; ++i) v *= factor(i, y(i));
  return v;
}

double BumpFunction::partial(const Vec& y, int j) const {
  check_dim(y.size(), dim(), "BumpFunction");
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) v *= i == j ? factor_derivative(i, y(i)) : factor(i, y(i));
  return v;
}

double BumpFunction::integral() const {
  // each transition integrates to half its width since s(u) + s(1-u) = 1
  double v = 1.0;
  for (int i = 0; i < dim(); ++i) {
    v *= (inner_.hi(i) - inner_.lo(i)) + 0.5 * (inner_.lo(i) - outer_.lo(i)) +
         0.5 * (outer_.hi(i) - inner_.hi(i));
  }
  return v;
}

BumpFunction make_bump(const Box& inner, const Box& outer) { return BumpFunction(inner, outer); }

BumpFunction centered_bump(const Vec& center, double inner_half, double outer_half) {
  const Vec a = Vec::Constant(center.size(), inner_half), b = Vec::Constant(center.size(), outer_half);
  return BumpFunction(Box(center - a, center + a), Box(center - b, center + b));
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 128) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

ParticleMeasure::ParticleMeasure(int ambient_dim, int param_dim)
    : ambient_dim_(ambient_dim), param_dim_(param_dim), coords_(ambient_dim), params_(param_dim) {
  if (ambient_dim < 1 || ambient_dim > kMaxDim) throw DomainError("ParticleMeasure: ambient dimension out of range");
  if (param_dim < 0 || param_dim > kMaxDim) throw DomainError("ParticleMeasure: parameter dimension out of range");
}

ParticleMeasure ParticleMeasure::point_mass(const Vec& p, double w) {
  ParticleMeasure mu(static_cast<int>(p.size()));
  mu.add(p, w);
  return mu;
}

void ParticleMeasure::reserve(std::size_t n) {
  for (auto& c : coords_) c.reserve(n);
  for (auto& c : params_) c.reserve(n);
  weights_.reserve(n);
}

void ParticleMeasure::resize(std::size_t n) {
  for (auto& c : coords_) c.resize(n);
  for (auto& c : params_) c.resize(n);
  weights_.resize(n);
}

void ParticleMeasure::set(std::size_t i, const Vec& position, double weight, const Vec& params) {
  for (int j = 0; j < ambient_dim_; ++j) coords_[j][i] = position(j);
  for (int j = 0; j < param_dim_; ++j) params_[j][i] = params(j);
  weights_[i] = weight;
}

void ParticleMeasure::add(const Vec& position, double weight, const Vec& params) {
  check_dim(position.size(), ambient_dim_, "ParticleMeasure::add position");
  check_dim(params.size(), param_dim_, "ParticleMeasure::add params");
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw DomainError("ParticleMeasure: weights must be finite and >= 0");
  for (int j = 0; j < ambient_dim_; ++j) coords_[j].push_back(position(j));
  for (int j = 0; j < param_dim_; ++j) params_[j].push_back(params(j));
  weights_.push_back(weight);
}

void ParticleMeasure::append(const ParticleMeasure& other, double scale) {
  check_dim(other.ambient_dim_, ambient_dim_, "ParticleMeasure::append");
  check_dim(other.param_dim_, param_dim_, "ParticleMeasure::append params");
  for (int j = 0; j < ambient_dim_; ++j) coords_[j].insert(coords_[j].end(), other.coords_[j].begin(), other.coords_[j].end());
  for (int j = 0; j < param_dim_; ++j) params_[j].insert(params_[j].end(), other.params_[j].begin(), other.params_[j].end());
  for (double w : other.weights_) weights_.push_back(w * scale);
}

Vec ParticleMeasure::position(std::size_t i) const {
  Vec p(ambient_dim_);
  for (int j = 0; j < ambient_dim_; ++j) p(j) = coords_[j][i];
  return p;
}

Vec ParticleMeasure::params(std::size_t i) const {
  Vec p(param_dim_);
  for (int j = 0; j < param_dim_; ++j) p(j) = params_[j][i];
  return p;
}

double ParticleMeasure::total_mass() const { return pairwise_sum(weights_.data(), weights_.size()); }

void ParticleMeasure::scale_weights(double f) {
  for (double& w : weights_) w *= f;
}

ParticleMeasure ParticleMeasure::normalized() const {
  const double m = total_mass();
  if (!(m > 0.0)) throw ZeroMass("normalize: total mass is zero");
  ParticleMeasure out = *this;
  out.scale_weights(1.0 / m);
  out.prior_mass_ = m;
  return out;
}

double ParticleMeasure::diameter() const {
  double d2 = 0.0;
  for (int j = 0; j < ambient_dim_; ++j) {
    if (coords_[j].empty()) return 0.0;
    auto [lo, hi] = std::minmax_element(coords_[j].begin(), coords_[j].end());
    d2 += (*hi - *lo) * (*hi - *lo);
  }
  return std::sqrt(d2);
}

ParticleMeasure surface_measure(const ChartFn& chart, const Box& param_box, const BumpFunction& density,
                                const std::vector<int>& nodes_per_dim) {
  const int p = param_box.dim();
  check_dim(density.dim(), p, "surface_measure: density");
  check_dim(static_cast<long>(nodes_per_dim.size()), p, "surface_measure: nodes_per_dim");
  if (param_box.degenerate()) throw EmptySupport("surface_measure: parameter box is degenerate");
  std::vector<Rule1D> rules;
  std::size_t total = 1;
  for (int i = 0; i < p; ++i) {
    if (nodes_per_dim[i] < 4) throw DomainError("surface_measure: need at least 4 nodes per dimension");
    rules.push_back(rule_for_count(param_box.lo(i), param_box.hi(i), nodes_per_dim[i]));
    total *= rules.back().size();
  }
  const int ambient = static_cast<int>(chart(param_box.center()).size());
  ParticleMeasure mu(ambient, p);
  mu.reserve(total);
  std::vector<std::size_t> idx(p, 0);
  Vec x(p);
  for (std::size_t k = 0; k < total; ++k) {
    double w = 1.0;
    for (int i = 0; i < p; ++i) {
      x(i) = rules[i].nodes[idx[i]];
      w *= rules[i].weights[idx[i]];
    }
    w *= density(x);
    if (w > 0.0) mu.add(chart(x), w, x);
    for (int i = 0; i < p; ++i) {
      if (++idx[i] < rules[i].size()) break;
      idx[i] = 0;
    }
  }
  if (mu.empty() || !(mu.total_mass() > 0.0)) throw EmptySupport("surface_measure: density vanishes on the grid");
  return mu.normalized();
}

ParticleMeasure surface_measure(const ChartFn& chart, const Box& param_box, const BumpFunction& density,
                                int nodes_per_dim) {
  return surface_measure(chart, param_box, density, std::vector<int>(param_box.dim(), nodes_per_dim));
}

namespace {

ParticleMeasure lower_measure(const ParticleMeasure& mu_S, const BumpFunction& psi_h, int nodes_h, bool cone) {
  check_dim(psi_h.dim(), 1, "lower measure: psi_h");
  const Box& sp = psi_h.outer();
  if (sp.lo(0) < 1.0 || sp.hi(0) > 2.0) throw DomainError("lower measure: spt psi_h must lie in [1, 2]");
  const Rule1D rh = rule_for_count(sp.lo(0), sp.hi(0), nodes_h);
  std::vector<double> wh(rh.size());
  for (std::size_t i = 0; i < rh.size(); ++i) wh[i] = rh.weights[i] * psi_h(make_vec({rh.nodes[i]}));
  const double norm = pairwise_sum(wh.data(), wh.size());
  if (!(norm > 0.0)) throw ZeroMass("lower measure: psi_h integrates to zero");

  const int d = mu_S.ambient_dim();
  const int pd = mu_S.param_dim();
  ParticleMeasure out(d + 1, pd + 1);
  out.resize(mu_S.size() * rh.size());
  Vec pos(d + 1), par(pd + 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i < rh.size(); ++i) {
    const double h = rh.nodes[i];
    for (std::size_t j = 0; j < mu_S.size(); ++j) {
      const Vec y = mu_S.position(j);
      if (cone) {
        pos << h * y, h;
      } else {
        pos << y, h;
      }
      par << mu_S.params(j), h;
      out.set(k++, pos, wh[i] / norm * mu_S.weight(j), par);
    }
  }
  return out.normalized();
}

}  // namespace

ParticleMeasure cone_lower_measure(const ParticleMeasure& mu_S, const BumpFunction& psi_h, int nodes_h) {
  return lower_measure(mu_S, psi_h, nodes_h, true);
}

ParticleMeasure cylinder_lower_measure(const ParticleMeasure& mu_S, const BumpFunction& psi_h, int nodes_h) {
  return lower_measure(mu_S, psi_h, nodes_h, false);
}

ParticleMeasure mollify(const ParticleMeasure& mu0, const BumpFunction& f) {
  check_dim(f.dim(), mu0.ambient_dim(), "mollify");
  ParticleMeasure out(mu0.ambient_dim(), mu0.param_dim());
  out.reserve(mu0.size());
  for (std::size_t i = 0; i < mu0.size(); ++i) {
    const Vec p = mu0.position(i);
    const double w = mu0.weight(i) * f(p);
    if (w > 0.0) out.add(p, w, mu0.params(i));
  }
  if (out.empty()) throw ZeroMass("mollify: no mass left after multiplying by f");
  return out.normalized();
}

ParticleMeasure pushforward(const ReparamFamily& fam, const Vec& t, const ParticleMeasure& mu) {
  const int n = fam.n();
  check_dim(mu.param_dim(), n + 1, "pushforward: atoms need parameters (x, h)");
  check_dim(t.size(), n, "pushforward: t");
  const PointMap tmap = fam.T_at(t);
  const Box& dom = fam.chart.varphi.domain();
  ParticleMeasure out(fam.ambient_dim(), n + 1);
  out.resize(mu.size());
  bool outside = false;
  Vec par(n + 1);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Vec p = mu.params(i);
    const Vec tx = tmap(p.head(n));
    if (!dom.contains(tx, 1e-12)) outside = true;
    par << tx, p(n);
    out.set(i, fam.lift(tx, p(n)), mu.weight(i), par);
  }
  if (outside) throw DomainError("pushforward: T_t(x) leaves the chart domain");
  return out;
}

std::vector<TNode> t_nodes(const BumpFunction& psi_t, const std::vector<int>& nodes_per_dim) {
  const int p = psi_t.dim();
  check_dim(static_cast<long>(nodes_per_dim.size()), p, "t_nodes");
  std::vector<Rule1D> rules;
  std::vector<std::vector<double>> vals;
  for (int i = 0; i < p; ++i) {
    rules.push_back(rule_for_count(psi_t.outer().lo(i), psi_t.outer().hi(i), nodes_per_dim[i]));
    std::vector<double> v;
    for (std::size_t k = 0; k < rules[i].size(); ++k) v.push_back(rules[i].weights[k] * psi_t.factor(i, rules[i].nodes[k]));
    vals.push_back(std::move(v));
  }
  std::vector<TNode> out;
  std::vector<std::size_t> idx(p, 0);
  std::size_t total = 1;
  for (int i = 0; i < p; ++i) total *= rules[i].size();
  for (std::size_t k = 0; k < total; ++k) {
    TNode nd{Vec(p), 1.0};
    for (int i = 0; i < p; ++i) {
      nd.t(i) = rules[i].nodes[idx[i]];
      nd.coef *= vals[i][idx[i]];
    }
    if (nd.coef > 0.0) out.push_back(nd);
    for (int i = 0; i < p; ++i) {
      if (++idx[i] < rules[i].size()) break;
      idx[i] = 0;
    }
  }
  return out;
}

}  // namespace conedecay
