#include <benchmark/benchmark.h>

#include "homodyne/functionals.hpp"
#include "homodyne/sampler.hpp"

namespace {

using namespace homodyne;

StateSpec reference_spacs() {
  return StateSpec::detected_spacs(ComplexAmplitude{0.83, 0.0}, 0.6);
}

void BM_TomogramPdf(benchmark::State& state) {
  const StateSpec s = reference_spacs();
  double x = -3.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tomogram_pdf(s, x, PhasePoint::radians(0.7)));
    x += 1e-4;
    if (x > 3.0) x = -3.0;
  }
}
BENCHMARK(BM_TomogramPdf);

void BM_SimulatePhase(benchmark::State& state) {
  const StateSpec s = reference_spacs();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    RandomStream stream(7, 0);
    benchmark::DoNotOptimize(
        sample_phase(s, PhasePoint::radians(0.0), n, NoiseModel{}, 0.0,
                     stream));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SimulatePhase)->Arg(5321);

void BM_OverlapKernel(benchmark::State& state) {
  const PhaseSlices slices = analytic_slices(reference_spacs(), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(overlap_kernel(slices, slices));
  }
}
BENCHMARK(BM_OverlapKernel);

void BM_RadialIntegrand(benchmark::State& state) {
  const PhaseSlices slices = analytic_slices(reference_spacs(), 11);
  const OverlapKernel kernel = overlap_kernel(slices, slices);
  for (auto _ : state) {
    benchmark::DoNotOptimize(radial_integrand(kernel));
  }
}
BENCHMARK(BM_RadialIntegrand);

void BM_PurityPipeline(benchmark::State& state) {
  SimulationPlan plan;
  plan.state = reference_spacs();
  plan.seed = 11;
  const QuadratureDataset dataset = simulate_dataset(plan);
  for (auto _ : state) {
    benchmark::DoNotOptimize(purity(dataset));
  }
}
BENCHMARK(BM_PurityPipeline);

}  // namespace

BENCHMARK_MAIN();
