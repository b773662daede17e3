#include "conedecay/fourier.hpp"
#include "conedecay/measures.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace conedecay;

namespace {

ParticleMeasure parabola_cone(int nx, int nh) {
  const auto graph = [](const Vec& y) { return make_vec({y(0), y(0) * y(0)}); };
  const ParticleMeasure s =
      surface_measure(graph, Box::interval(-0.25, 0.25), centered_bump(Vec::Zero(1), 0.125, 0.25), nx);
  return cone_lower_measure(s, make_bump(Box::interval(1.25, 1.75), Box::interval(1.0, 2.0)), nh);
}

const Vec kXi = make_vec({-50.0, 100.0, 7.0});

void BM_ft_reference(benchmark::State& st) {
  const ParticleMeasure mu = parabola_cone(static_cast<int>(st.range(0)), 64);
  for (auto _ : st) benchmark::DoNotOptimize(ft_reference(mu, kXi));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(mu.size()));
}

void BM_ft(benchmark::State& st) {
  const ParticleMeasure mu = parabola_cone(static_cast<int>(st.range(0)), 64);
  for (auto _ : st) benchmark::DoNotOptimize(ft(mu, kXi));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(mu.size()));
}

void BM_ft_many(benchmark::State& st) {
  const ParticleMeasure mu = parabola_cone(256, 64);
  std::vector<Vec> xis;
  for (int i = 0; i < st.range(0); ++i) xis.push_back((16.0 + i) * kXi.normalized());
  for (auto _ : st) benchmark::DoNotOptimize(ft_many(mu, xis));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(mu.size() * xis.size()));
}

}  // namespace

BENCHMARK(BM_ft_reference)->Arg(256)->Arg(4096);
BENCHMARK(BM_ft)->Arg(256)->Arg(4096);
BENCHMARK(BM_ft_many)->Arg(8)->Arg(64);

BENCHMARK_MAIN();
