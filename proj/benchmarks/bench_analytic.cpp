#include <benchmark/benchmark.h>

#include <memory>

#include "risgeom/analytic.hpp"

using namespace risgeom;

namespace {

NetworkParams scenario(double lambda_b, double mu) {
  NetworkParams p;
  p.lambda_b = lambda_b;
  p.mu = mu;
  return p;
}

}  // namespace

static void BM_ReflectionProbability(benchmark::State& state) {
  double t = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(reflection_probability(100.0, t, 1.3, 2.86479e-3));
    t = t < 1000.0 ? t + 0.37 : 1.0;
  }
}
BENCHMARK(BM_ReflectionProbability);

// Fresh engine per iteration so every reflection integral is recomputed.
static void BM_BlindSpotFraction(benchmark::State& state) {
  const double lambda_b = static_cast<double>(state.range(0));
  for (auto _ : state) {
    const AnalyticEngine e(scenario(lambda_b, 0.1));
    benchmark::DoNotOptimize(e.blind_spot_fraction());
  }
}
BENCHMARK(BM_BlindSpotFraction)->Arg(300)->Arg(700)->Unit(benchmark::kMillisecond);

static void BM_EllipticReflectionIntegral(benchmark::State& state) {
  double y = 101.0;
  for (auto _ : state) {
    const AnalyticEngine e(scenario(500, 0.2));
    benchmark::DoNotOptimize(e.reflection_integral(100.0, y));
    y = y < 2000.0 ? y * 1.1 : 101.0;
  }
}
BENCHMARK(BM_EllipticReflectionIntegral)->Unit(benchmark::kMicrosecond);

static void BM_AssociationProbabilities(benchmark::State& state) {
  for (auto _ : state) {
    const AnalyticEngine e(scenario(500, 0.2));
    benchmark::DoNotOptimize(e.association_probabilities());
  }
}
BENCHMARK(BM_AssociationProbabilities)->Unit(benchmark::kMillisecond)->Iterations(3);

// Shared cache: the cost of one more μ point in a sweep.
static void BM_CoverageSweepPoint(benchmark::State& state) {
  auto cache = std::make_shared<ReflectionCache>();
  AnalyticEngine(scenario(700, 0.5), {}, cache).coverage_probability(1e7);
  double mu = 0.01;
  for (auto _ : state) {
    const AnalyticEngine e(scenario(700, mu), {}, cache);
    benchmark::DoNotOptimize(e.coverage_probability(1e7));
    mu = mu < 0.99 ? mu + 0.01 : 0.01;
  }
}
BENCHMARK(BM_CoverageSweepPoint)->Unit(benchmark::kMillisecond);
