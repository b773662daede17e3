#include "conedecay/fourier.hpp"
#include "conedecay/measures.hpp"

#include <algorithm>
#include <exception>

namespace conedecay {

AveragedMeasure::AveragedMeasure(ReparamFamily fam, ParticleMeasure mu, std::vector<TNode> nodes)
    : fam_(std::move(fam)), mu_(std::move(mu)), nodes_(std::move(nodes)) {
  check_dim(mu_.param_dim(), fam_.n() + 1, "AveragedMeasure: atoms need parameters (x, h)");
  if (nodes_.empty()) throw EmptySupport("AveragedMeasure: no t-nodes");
}

double AveragedMeasure::coef_sum() const {
  std::vector<double> c;
  c.reserve(nodes_.size());
  for (const TNode& nd : nodes_) c.push_back(nd.coef);
  return pairwise_sum(c.data(), c.size());
}

ParticleMeasure AveragedMeasure::materialize(std::size_t cap) const {
  const std::size_t m = mu_.size();
  if (atom_count() > cap) {
    throw CapacityExceeded("average: " + std::to_string(atom_count()) + " atoms exceed the cap of " +
                           std::to_string(cap));
  }
  ParticleMeasure out(fam_.ambient_dim(), fam_.n() + 1);
  out.resize(atom_count());
  const long nn = static_cast<long>(nodes_.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic, 16)
  for (long i = 0; i < nn; ++i) {
    try {
      const ParticleMeasure p = pushforward_at(static_cast<std::size_t>(i));
      for (std::size_t j = 0; j < m; ++j) out.set(i * m + j, p.position(j), p.weight(j) * nodes_[i].coef, p.params(j));
    } catch (...) {
#pragma omp critical(conedecay_average_err)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<cplx> AveragedMeasure::ft_fubini(const std::vector<Vec>& xis) const {
  for (const Vec& xi : xis) check_dim(xi.size(), fam_.ambient_dim(), "ft_fubini");
  const std::size_t nx = xis.size();
  // Nodes are processed in fixed blocks; per-node values are combined
  // pairwise inside a block and block totals pairwise at the end, so the
  // result is independent of scheduling.
  constexpr std::size_t kBlock = 1024;
  const std::size_t nn = nodes_.size();
  const std::size_t nblocks = (nn + kBlock - 1) / kBlock;
  std::vector<cplx> block_sums(nblocks * nx);
  std::vector<cplx> per_node(kBlock * nx);
  std::exception_ptr err;
  for (std::size_t b = 0; b < nblocks; ++b) {
    const std::size_t lo = b * kBlock, hi = std::min(nn, lo + kBlock);
    const long cnt = static_cast<long>(hi - lo);
#pragma omp parallel
    {
      std::vector<cplx> parts;
#pragma omp for schedule(dynamic, 4)
      for (long i = 0; i < cnt; ++i) {
        try {
          const ParticleMeasure p = pushforward_at(lo + i);
          const double* ptrs[kMaxDim];
          for (int j = 0; j < kMaxDim; ++j) ptrs[j] = j < p.ambient_dim() ? p.coord(j).data() : nullptr;
          const double c = nodes_[lo + i].coef;
          const std::size_t n = p.size();
          const std::size_t nchunks = (n + kChunk - 1) / kChunk;
          parts.resize(nchunks);
          for (std::size_t x = 0; x < nx; ++x) {
            for (std::size_t ch = 0; ch < nchunks; ++ch) {
              parts[ch] = kernel::phase_sum(ptrs, p.ambient_dim(), p.weights().data(), ch * kChunk,
                                            std::min(n, (ch + 1) * kChunk), xis[x].data());
            }
            per_node[x * kBlock + i] = c * pairwise_sum(parts.data(), nchunks);
          }
        } catch (...) {
#pragma omp critical(conedecay_fubini_err)
          if (!err) err = std::current_exception();
        }
      }
    }
    if (err) std::rethrow_exception(err);
    for (std::size_t x = 0; x < nx; ++x) block_sums[x * nblocks + b] = pairwise_sum(&per_node[x * kBlock], hi - lo);
  }
  std::vector<cplx> out(nx);
  for (std::size_t x = 0; x < nx; ++x) out[x] = pairwise_sum(&block_sums[x * nblocks], nblocks);
  return out;
}

ParticleMeasure average(const ReparamFamily& fam, const ParticleMeasure& mu, const BumpFunction& psi_t,
                        const std::vector<int>& t_nodes_per_dim, std::size_t cap) {
  check_dim(psi_t.dim(), fam.n(), "average: psi_t");
  for (int i = 0; i < fam.n(); ++i) {
    if (psi_t.outer().lo(i) < fam.cU.lo(i) - 1e-12 || psi_t.outer().hi(i) > fam.cU.hi(i) + 1e-12) {
      throw DomainError("average: spt psi_t must lie in cU");
    }
  }
  AveragedMeasure nu(fam, mu, t_nodes(psi_t, t_nodes_per_dim));
  return nu.materialize(cap);
}

}  // namespace conedecay
