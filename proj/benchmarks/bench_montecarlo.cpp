#include <benchmark/benchmark.h>

#include "risgeom/association.hpp"
#include "risgeom/estimate.hpp"
#include "risgeom/quadrature.hpp"
#include "risgeom/raster.hpp"
#include "risgeom/realization.hpp"

using namespace risgeom;

namespace {

NetworkParams scenario(double lambda_b, double mu) {
  NetworkParams p;
  p.lambda_b = lambda_b;
  p.mu = mu;
  return p;
}

Window window_for(const NetworkParams& p) {
  return Window::centered({0, 0}, 1000, truncation_radius(blockage_rate(p), 1e-8));
}

}  // namespace

static void BM_BuildRealization(benchmark::State& state) {
  const NetworkParams p = scenario(static_cast<double>(state.range(0)), 0.2);
  const Window w = window_for(p);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(build_realization(p, w, ++seed));
}
BENCHMARK(BM_BuildRealization)->Arg(300)->Arg(700)->Unit(benchmark::kMillisecond);

static void BM_AssociateUser(benchmark::State& state) {
  const NetworkParams p = scenario(500, 0.2);
  const auto world = build_realization(p, window_for(p), 3);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(associate_user({x, 0.0}, world));
    x = x < 400.0 ? x + 7.0 : -400.0;
  }
}
BENCHMARK(BM_AssociateUser)->Unit(benchmark::kMicrosecond);

static void BM_EstimateIndependent(benchmark::State& state) {
  const NetworkParams p = scenario(500, 0.2);
  const std::vector<MetricId> metrics{MetricId::parse("A_i"), MetricId::parse("P_cov(1000000)"),
                                      MetricId::parse("P_v(200)")};
  EstimateOptions opt;
  opt.n_reps = 10'000;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_metrics(metrics, p, window_for(p), opt));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * opt.n_reps));
}
BENCHMARK(BM_EstimateIndependent)->Unit(benchmark::kMillisecond);

static void BM_EstimateGeometricLos(benchmark::State& state) {
  const NetworkParams p = scenario(700, 0.0);
  EstimateOptions opt;
  opt.n_reps = 10'000;
  opt.mode = BlockingMode::geometric;
  opt.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_metric(MetricId::parse("P_LoS(200)"), p, window_for(p), opt));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * opt.n_reps));
}
BENCHMARK(BM_EstimateGeometricLos)->Unit(benchmark::kMillisecond);

static void BM_RasterBlindMap(benchmark::State& state) {
  const NetworkParams p = scenario(500, 0.1);
  const auto world = build_realization(p, window_for(p), 1);
  for (auto _ : state) benchmark::DoNotOptimize(raster_blind_map(world, 10.0));
}
BENCHMARK(BM_RasterBlindMap)->Unit(benchmark::kMillisecond);
