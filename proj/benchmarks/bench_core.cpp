#include <benchmark/benchmark.h>

#include "gcm/classical.hpp"
#include "gcm/eigensolver.hpp"
#include "gcm/hamiltonian.hpp"
#include "gcm/spectral_stats.hpp"

using namespace gcm;

namespace {

const ModelParams kFig1 = ModelParams::from_kappa(-1.0, 1.09, 1.0, 25e-4);

void BM_Assemble(benchmark::State& state) {
  const auto spec = BasisSpec::make(QuantScheme::FiveD, 1.2, kFig1, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(kFig1, spec));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Assemble)->RangeMultiplier(2)->Range(500, 8000)->Unit(benchmark::kMillisecond);

void BM_SolveValues(benchmark::State& state) {
  const auto M = assemble(kFig1, BasisSpec::make(QuantScheme::TwoDEven, 1.2, kFig1,
                                                 static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(solve(M));
}
BENCHMARK(BM_SolveValues)->RangeMultiplier(2)->Range(500, 4000)->Unit(benchmark::kMillisecond);

void BM_OptimizeAosc(benchmark::State& state) {
  const auto spec = BasisSpec::make(QuantScheme::TwoDEven, 1.0, kFig1, 4000);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_a_osc(kFig1, spec));
}
BENCHMARK(BM_OptimizeAosc)->Unit(benchmark::kMillisecond);

void BM_FitBrody(benchmark::State& state) {
  const auto s = brody_sample(0.5, static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(fit_brody(s));
}
BENCHMARK(BM_FitBrody)->Arg(1000)->Arg(10000);

void BM_OmegaVsEnergy(benchmark::State& state) {
  std::vector<double> levels;
  double e = 0.0;
  for (const double s : brody_sample(0.7, 10000, 3)) levels.push_back(e += s);
  StatsConfig cfg;
  cfg.bias_trials = 0;
  for (auto _ : state) benchmark::DoNotOptimize(omega_vs_energy(levels, cfg));
}
BENCHMARK(BM_OmegaVsEnergy)->Unit(benchmark::kMillisecond);

void BM_SaliTrajectory(benchmark::State& state) {
  SaliOptions o;
  o.t_max = static_cast<double>(state.range(0));
  const PhasePoint p0{0.3, 0.0, 0.1, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(sali_classify(p0, kFig1, o));
}
BENCHMARK(BM_SaliTrajectory)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
