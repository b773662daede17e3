#include "conedecay/types.hpp"

namespace conedecay {

Vec make_vec(std::initializer_list<double> values) {
  Vec v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Box::Box(Vec lo_, Vec hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  check_dim(hi.size(), lo.size(), "Box");
  for (int i = 0; i < dim(); ++i) {
    if (hi(i) < lo(i)) throw DomainError("Box: hi < lo in coordinate " + std::to_string(i));
  }
}

Box Box::cube(int dim, double half_width) {
  return Box(Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width));
}

Box Box::interval(double a, double b) { return Box(make_vec({a}), make_vec({b})); }

bool Box::contains(const Vec& y, double slack) const {
  if (y.size() != lo.size()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (y(i) < lo(i) - slack || y(i) > hi(i) + slack) return false;
  }
  return true;
}

bool Box::degenerate() const {
  for (int i = 0; i < dim(); ++i) {
    if (!(hi(i) > lo(i))) return true;
  }
  return false;
}

bool Box::strictly_inside(const Box& outer) const {
  if (outer.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (!(lo(i) > outer.lo(i) && hi(i) < outer.hi(i))) return false;
  }
  return true;
}

Box Box::scaled(double f) const {
  Vec c = center();
  Vec h = half_widths() * f;
  return Box(c - h, c + h);
}

Box Box::product(const Box& other) const {
  Vec l(dim() + other.dim()), h(dim() + other.dim());
  l << lo, other.lo;
  h << hi, other.hi;
  return Box(l, h);
}

}  // namespace conedecay
