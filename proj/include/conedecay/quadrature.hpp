#pragma once

#include "conedecay/types.hpp"

#include <vector>

namespace conedecay {

struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [-1, 1].
Rule1D gauss_legendre(int n);
// Same rule mapped to [a, b].
Rule1D gauss_legendre(int n, double a, double b);
// `panels` equal panels of `per_panel`-point rules on [a, b].
Rule1D composite_gauss_legendre(double a, double b, int panels, int per_panel = 16);
// Single rule up to 64 nodes, 16-point panels beyond that.
Rule1D rule_for_count(double a, double b, int nodes);

}  // namespace conedecay
