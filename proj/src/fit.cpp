#include "conedecay/fourier.hpp"

#include <algorithm>
#include <cmath>

namespace conedecay {

std::vector<double> geometric_grid(double kmin, double kmax, int points_per_octave) {
  if (!(kmin > 0.0) || !(kmax >= kmin) || points_per_octave < 1) {
    throw DomainError("geometric_grid: need 0 < kmin <= kmax and ppo >= 1");
  }
  std::vector<double> ks;
  const double steps = std::log2(kmax / kmin) * points_per_octave;
  const long n = static_cast<long>(std::floor(steps + 1e-9));
  for (long j = 0; j <= n; ++j) ks.push_back(kmin * std::exp2(static_cast<double>(j) / points_per_octave));
  return ks;
}

namespace {

FitResult least_squares(const std::vector<double>& lx, const std::vector<double>& ly) {
  const std::size_t n = lx.size();
  if (n < 2) throw AllZeroValues("fit_exponent: fewer than two non-zero values");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (my + slope * (lx[i] - mx));
    ssr += r * r;
  }
  FitResult f;
  f.exponent = -slope;
  f.r2 = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
  f.points = n;
  return f;
}

}  // namespace

FitResult fit_exponent(const std::vector<double>& ks, const std::vector<double>& values, Envelope mode,
                       int points_per_octave) {
  check_dim(static_cast<long>(values.size()), static_cast<long>(ks.size()), "fit_exponent");
  if (ks.size() < 2 || std::log2(ks.back() / ks.front()) < 3.0 - 1e-9) {
    throw InsufficientRange("fit_exponent: need at least 3 octaves of data");
  }
  if (std::none_of(values.begin(), values.end(), [](double v) { return v > 0.0; })) {
    throw AllZeroValues("fit_exponent: all values are zero");
  }
  std::vector<double> lx, ly;
  if (mode == Envelope::Raw) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      if (values[i] > 0.0 && std::isfinite(values[i])) {
        lx.push_back(std::log(ks[i]));
        ly.push_back(std::log(values[i]));
      }
    }
  } else {
    const std::size_t ppo = static_cast<std::size_t>(points_per_octave);
    const std::size_t blocks = ks.size() / ppo;
    if (blocks < 3) throw InsufficientRange("fit_exponent: need at least 3 full octave blocks");
    for (std::size_t b = 0; b < blocks; ++b) {
      std::size_t best = b * ppo;
      for (std::size_t i = b * ppo; i < (b + 1) * ppo; ++i) {
        if (values[i] > values[best]) best = i;
      }
      if (values[best] > 0.0) {
        lx.push_back(std::log(ks[best]));
        ly.push_back(std::log(values[best]));
      }
    }
  }
  return least_squares(lx, ly);
}

FitResult fit_exponent(const DecayProfile& profile, Envelope mode) {
  return fit_exponent(profile.ks, profile.values, mode, profile.points_per_octave);
}

DecayProfile make_profile(std::vector<double> ks, std::vector<double> values, int points_per_octave,
                          Envelope mode, std::string label, Vec eta) {
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (!(ks[i] > ks[i - 1])) throw DomainError("profile: ks must be strictly increasing");
  }
  DecayProfile p;
  p.ks = std::move(ks);
  p.values = std::move(values);
  p.points_per_octave = points_per_octave;
  p.mode = mode;
  p.direction = std::move(label);
  p.eta = std::move(eta);
  p.fit = fit_exponent(p, mode);
  return p;
}

}  // namespace conedecay
