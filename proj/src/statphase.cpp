#include "conedecay/statphase.hpp"

#include "conedecay/morse.hpp"
#include "conedecay/quadrature.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

namespace conedecay {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0.0, 1.0);
// Smallest grid per dimension; resolves the cutoff transitions of the
// amplitude independently of lambda.
constexpr int kMinDirectNodes = 256;

}  // namespace

Amplitude Amplitude::from_bump(const BumpFunction& b) {
  return {b.outer(), [b](const Vec& y) { return b(y); }};
}

Amplitude Amplitude::gaussian(const BumpFunction& cutoff, const Vec& center, double alpha) {
  return {cutoff.outer(), [cutoff, center, alpha](const Vec& y) {
            const double c = cutoff(y);
            return c == 0.0 ? 0.0 : c * std::exp(-alpha * (y - center).squaredNorm());
          }};
}

PhaseProblem PhaseProblem::make(ScalarField phase, Amplitude amplitude, Vec z0) {
  PhaseProblem p;
  p.n = phase.dim();
  check_dim(amplitude.support.dim(), p.n, "PhaseProblem: amplitude");
  check_dim(z0.size(), p.n, "PhaseProblem: z0");
  if (phase.gradient(z0).lpNorm<Eigen::Infinity>() > 1e-8) throw NotCritical("PhaseProblem: grad phi(z0) != 0");
  if (std::abs(phase(z0)) > 1e-10) throw DomainError("PhaseProblem: phi(z0) must vanish");
  const Mat h = phase.hessian(z0);
  p.hess_det = std::abs(h.determinant());
  if (p.hess_det < 1e-8) throw DegenerateCritical("PhaseProblem: |det H phi(z0)| below 1e-8");
  Eigen::SelfAdjointEigenSolver<Mat> es(h, Eigen::EigenvaluesOnly);
  int m = 0;
  for (int i = 0; i < p.n; ++i) m += es.eigenvalues()(i) > 0 ? 1 : 0;
  p.sig = QuadraticSignature(p.n, m);
  p.phase = std::move(phase);
  p.amplitude = std::move(amplitude);
  p.z0 = std::move(z0);
  return p;
}

cplx gaussian_quadratic(double lambda, const QuadraticSignature& sig) {
  const double n = sig.n, m = sig.m;
  return std::pow(kPi, 0.5 * n) * std::pow(cplx(1.0, -lambda), -0.5 * m) *
         std::pow(cplx(1.0, lambda), -0.5 * (n - m));
}

cplx f_m(cplx w, const QuadraticSignature& sig) {
  const double n = sig.n, m = sig.m;
  return std::pow(w - kI, -0.5 * m) * std::pow(w + kI, -0.5 * (n - m));
}

cplx f_m_derivative(cplx w, const QuadraticSignature& sig) {
  const double n = sig.n, m = sig.m;
  return f_m(w, sig) * (-0.5 * m / (w - kI) - 0.5 * (n - m) / (w + kI));
}

cplx leading_constant(const QuadraticSignature& sig) {
  return std::exp(kI * (kPi * (2.0 * sig.m - sig.n) / 4.0));
}

double taylor_bound(const QuadraticSignature& sig, double lambda0) {
  double b = 0.0;
  for (int k = 0; k < 3600; ++k) {
    const cplx w = std::polar(1.0 / lambda0, 2.0 * kPi * k / 3600.0);
    b = std::max(b, std::abs(f_m_derivative(w, sig)));
  }
  return b;
}

namespace {

std::vector<Rule1D> make_rules(const Box& box, const std::vector<int>& nodes) {
  std::vector<Rule1D> rules;
  for (int j = 0; j < box.dim(); ++j) {
    rules.push_back(composite_gauss_legendre(box.lo(j), box.hi(j), (nodes[j] + 15) / 16, 16));
  }
  return rules;
}

// Rows are all index tuples over the leading n-1 dimensions; each row is one
// vectorized kernel call over the last dimension.
cplx tensor_sum(double lambda, const PhaseProblem& pb, const std::vector<Rule1D>& rules) {
  const int n = pb.n;
  const Rule1D& last = rules[n - 1];
  const std::size_t len = last.size();
  long rows = 1;
  for (int j = 0; j < n - 1; ++j) rows *= static_cast<long>(rules[j].size());
  std::vector<cplx> row_sums(rows);
  const double xi = -lambda / (2.0 * kPi);
#pragma omp parallel
  {
    std::vector<double> pos(len), w(len);
    std::vector<cplx> parts;
    Vec y(n);
#pragma omp for schedule(dynamic, 8)
    for (long r = 0; r < rows; ++r) {
      long rem = r;
      double wrow = 1.0;
      for (int j = n - 2; j >= 0; --j) {
        const long k = rem % static_cast<long>(rules[j].size());
        rem /= static_cast<long>(rules[j].size());
        y(j) = rules[j].nodes[k];
        wrow *= rules[j].weights[k];
      }
      for (std::size_t i = 0; i < len; ++i) {
        y(n - 1) = last.nodes[i];
        const double a = pb.amplitude(y);
        w[i] = a * last.weights[i];
        pos[i] = a == 0.0 ? 0.0 : pb.phase(y);
      }
      const double* ptr[1] = {pos.data()};
      const std::size_t nchunks = (len + kChunk - 1) / kChunk;
      parts.resize(nchunks);
      for (std::size_t c = 0; c < nchunks; ++c) {
        parts[c] = kernel::phase_sum(ptr, 1, w.data(), c * kChunk, std::min(len, (c + 1) * kChunk), &xi);
      }
      row_sums[r] = wrow * pairwise_sum(parts.data(), nchunks);
    }
  }
  return pairwise_sum(row_sums.data(), row_sums.size());
}

}  // namespace

DirectResult I_direct(double lambda, const PhaseProblem& pb, double nodes_per_wavelength, std::size_t node_cap) {
  const Box& sp = pb.amplitude.support;
  const int n = pb.n;
  // osc_j from gradient samples over the support
  Vec gmax = Vec::Zero(n);
  for (const Vec& y : grid_points(sp, n == 1 ? 257 : 33)) gmax = gmax.cwiseMax(pb.phase.gradient(y).cwiseAbs());
  DirectResult res;
  std::size_t total = 1;
  for (int j = 0; j < n; ++j) {
    const double waves = std::abs(lambda) * gmax(j) * (sp.hi(j) - sp.lo(j)) / (2.0 * kPi);
    int nodes = std::max(kMinDirectNodes, static_cast<int>(std::ceil(nodes_per_wavelength * waves)));
    nodes = (nodes + 15) / 16 * 16;
    res.nodes_per_dim.push_back(nodes);
    total *= static_cast<std::size_t>(nodes);
  }
  if (total > node_cap) {
    throw ResolutionExceeded("I_direct: " + std::to_string(total) + " nodes exceed the cap of " +
                             std::to_string(node_cap));
  }
  std::vector<int> fine = res.nodes_per_dim;
  for (int& v : fine) v *= 2;
  res.coarse = tensor_sum(lambda, pb, make_rules(sp, res.nodes_per_dim));
  res.value = tensor_sum(lambda, pb, make_rules(sp, fine));
  const double scale = std::abs(res.value);
  res.rel_diff = std::abs(res.value - res.coarse) / (scale > 0.0 ? scale : 1.0);
  res.converged = res.rel_diff < 1e-8;
  return res;
}

cplx I_tensor(double lambda, const PhaseProblem& pb, const std::vector<int>& nodes_per_dim) {
  check_dim(static_cast<long>(nodes_per_dim.size()), pb.n, "I_tensor: nodes");
  return tensor_sum(lambda, pb, make_rules(pb.amplitude.support, nodes_per_dim));
}

cplx gaussian_direct(double lambda, const QuadraticSignature& sig, double nodes_per_wavelength, double half_width) {
  const int n = sig.n;
  const double l = half_width;
  // sup |d_j Q| * width = 2l * 2l
  const double waves = std::abs(lambda) * 4.0 * l * l / (2.0 * kPi);
  const int nodes = (std::max(128, static_cast<int>(std::ceil(nodes_per_wavelength * waves))) + 15) / 16 * 16;
  const Rule1D r = composite_gauss_legendre(-l, l, nodes / 16, 16);
  const std::size_t len = r.size();
  // The integrand is a product over coordinates, so each row of the tensor
  // grid only needs the 1-D node values.
  std::vector<double> a(len), q(len);
  for (std::size_t i = 0; i < len; ++i) {
    a[i] = r.weights[i] * std::exp(-r.nodes[i] * r.nodes[i]);
    q[i] = r.nodes[i] * r.nodes[i];
  }
  const double xi = -lambda / (2.0 * kPi);
  const double s_last = sig.m == n ? 1.0 : -1.0;
  const double s_first = sig.m >= 1 ? 1.0 : -1.0;
  const std::size_t rows = n == 1 ? 1 : len;
  std::vector<cplx> row_sums(rows);
#pragma omp parallel
  {
    std::vector<double> pos(len), w(len);
    std::vector<cplx> parts;
#pragma omp for schedule(static)
    for (std::size_t row = 0; row < rows; ++row) {
      const double q0 = n == 1 ? 0.0 : s_first * q[row];
      const double a0 = n == 1 ? 1.0 : a[row];
      for (std::size_t i = 0; i < len; ++i) {
        pos[i] = q0 + s_last * q[i];
        w[i] = a0 * a[i];
      }
      const double* ptr[1] = {pos.data()};
      const std::size_t nchunks = (len + kChunk - 1) / kChunk;
      parts.resize(nchunks);
      for (std::size_t c = 0; c < nchunks; ++c) {
        parts[c] = kernel::phase_sum(ptr, 1, w.data(), c * kChunk, std::min(len, (c + 1) * kChunk), &xi);
      }
      row_sums[row] = pairwise_sum(parts.data(), nchunks);
    }
  }
  return pairwise_sum(row_sums.data(), rows);
}

cplx I_direct_reference(double lambda, const PhaseProblem& pb, const std::vector<int>& nodes_per_dim) {
  const auto rules = make_rules(pb.amplitude.support, nodes_per_dim);
  const int n = pb.n;
  std::size_t total = 1;
  for (const auto& r : rules) total *= r.size();
  std::vector<double> re(total), im(total);
  std::vector<std::size_t> idx(n, 0);
  Vec y(n);
  for (std::size_t k = 0; k < total; ++k) {
    double w = 1.0;
    for (int j = 0; j < n; ++j) {
      y(j) = rules[j].nodes[idx[j]];
      w *= rules[j].weights[idx[j]];
    }
    const double a = pb.amplitude(y);
    const double ph = lambda * pb.phase(y);
    re[k] = w * a * std::cos(ph);
    im[k] = w * a * std::sin(ph);
    for (int j = n - 1; j >= 0; --j) {
      if (++idx[j] < rules[j].size()) break;
      idx[j] = 0;
    }
  }
  return {pairwise_sum(re.data(), total), pairwise_sum(im.data(), total)};
}

cplx I_leading(double lambda, const PhaseProblem& pb) {
  if (!(lambda > 0.0)) throw DomainError("I_leading: lambda must be positive");
  const double n = pb.n;
  return leading_constant(pb.sig) * std::pow(2.0 * kPi, 0.5 * n) / std::sqrt(pb.hess_det) * pb.amplitude(pb.z0) *
         std::pow(lambda, -0.5 * n);
}

void ScanResult::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << "lambda,err\n";
  out.precision(17);
  for (std::size_t i = 0; i < lambdas.size(); ++i) out << lambdas[i] << ',' << errors[i] << '\n';
}

ScanResult error_scan(const PhaseProblem& pb, const std::vector<double>& lambdas, double nodes_per_wavelength) {
  if (lambdas.empty() || lambdas.front() < kLambda0) {
    throw DomainError("error_scan: lambda grid must start at or above lambda0 = 8");
  }
  ScanResult s;
  s.lambdas = lambdas;
  for (double lam : lambdas) {
    const DirectResult d = I_direct(lam, pb, nodes_per_wavelength);
    const cplx l = I_leading(lam, pb);
    s.direct.push_back(d.value);
    s.leading.push_back(l);
    s.errors.push_back(std::abs(d.value - l));
    s.all_converged = s.all_converged && d.converged;
  }
  s.fit = fit_exponent(s.lambdas, s.errors, Envelope::Raw, 1);
  s.threshold = 0.5 * (pb.n + 1) - 0.1;
  s.pass = s.fit.exponent >= s.threshold;
  return s;
}

}  // namespace conedecay
