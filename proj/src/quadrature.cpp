#include "conedecay/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace conedecay {

namespace {

Rule1D compute_gl(int n) {
  Rule1D r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // refresh the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    if (n == 1) {
      dp = 1.0;
    } else {
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;
  return r;
}

}  // namespace

Rule1D gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  static std::mutex mu;
  static std::map<int, Rule1D> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  return cache.emplace(n, compute_gl(n)).first->second;
}

Rule1D gauss_legendre(int n, double a, double b) {
  Rule1D base = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    base.nodes[i] = c + h * base.nodes[i];
    base.weights[i] *= h;
  }
  return base;
}

Rule1D composite_gauss_legendre(double a, double b, int panels, int per_panel) {
  if (panels < 1) throw DomainError("composite_gauss_legendre: panels must be positive");
  const Rule1D base = gauss_legendre(per_panel);
  Rule1D r;
  r.nodes.reserve(static_cast<std::size_t>(panels) * per_panel);
  r.weights.reserve(r.nodes.capacity());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double c = lo + 0.5 * width, h = 0.5 * width;
    for (int i = 0; i < per_panel; ++i) {
      r.nodes.push_back(c + h * base.nodes[i]);
      r.weights.push_back(h * base.weights[i]);
    }
  }
  return r;
}

Rule1D rule_for_count(double a, double b, int nodes) {
  if (nodes <= 64) return gauss_legendre(nodes, a, b);
  return composite_gauss_legendre(a, b, (nodes + 15) / 16, 16);
}

}  // namespace conedecay
