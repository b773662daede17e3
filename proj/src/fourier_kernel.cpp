// Built with -O3 -ffast-math (see CMakeLists.txt) so the loop vectorizes
// through libmvec. The phase is reduced to [-1/2, 1/2] cycles before the
// trigonometric calls, which keeps the vector cos in its accurate range. The
// sine is written as a shifted cosine: GCC otherwise fuses the pair into a
// scalar sincos call and the loop stops vectorizing.
#include "conedecay/fourier.hpp"

#include <cmath>

namespace conedecay::kernel {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kHalfPi = 1.5707963267948966192313216916398;

template <int D>
cplx sum_fixed(const double* const* coords, const double* __restrict w, std::size_t begin, std::size_t end,
               const double* xi) {
  const double* __restrict c0 = coords[0] + begin;
  const double* __restrict c1 = D > 1 ? coords[1] + begin : nullptr;
  const double* __restrict c2 = D > 2 ? coords[2] + begin : nullptr;
  const double* __restrict c3 = D > 3 ? coords[3] + begin : nullptr;
  const double* __restrict ww = w + begin;
  const double x0 = xi[0];
  const double x1 = D > 1 ? xi[1] : 0.0;
  const double x2 = D > 2 ? xi[2] : 0.0;
  const double x3 = D > 3 ? xi[3] : 0.0;
  const long n = static_cast<long>(end - begin);
  double re = 0.0, im = 0.0;
#pragma omp simd reduction(+ : re, im)
  for (long i = 0; i < n; ++i) {
    double p = c0[i] * x0;
    if constexpr (D > 1) p += c1[i] * x1;
    if constexpr (D > 2) p += c2[i] * x2;
    if constexpr (D > 3) p += c3[i] * x3;
    p -= std::nearbyint(p);
    const double a = kTwoPi * p;
    re += ww[i] * std::cos(a);
    im += ww[i] * std::cos(a + kHalfPi);
  }
  return {re, im};
}

}  // namespace

cplx phase_sum(const double* const* coords, int dim, const double* w, std::size_t begin, std::size_t end,
               const double* xi) {
  switch (dim) {
    case 1:
      return sum_fixed<1>(coords, w, begin, end, xi);
    case 2:
      return sum_fixed<2>(coords, w, begin, end, xi);
    case 3:
      return sum_fixed<3>(coords, w, begin, end, xi);
    case 4:
      return sum_fixed<4>(coords, w, begin, end, xi);
    default:
      return {0.0, 0.0};
  }
}

}  // namespace conedecay::kernel
