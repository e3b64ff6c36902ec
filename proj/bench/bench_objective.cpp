// Serial reference vs OpenMP kernels for the fit objective: residuals (one
// rollout per trajectory) and the forward-difference Jacobian (eleven more).

#include <span>
#include <vector>

#include <benchmark/benchmark.h>

#include "greyhull/constraints.hpp"
#include "greyhull/dataset.hpp"
#include "greyhull/identification.hpp"
#include "greyhull/presets.hpp"
#include "greyhull/scenario.hpp"

namespace {

using namespace greyhull;

const FitProblem& problem() {
  static const FitProblem p = [] {
    const VesselPreset a = ship_a();
    const auto specs = sample_scenarios(a, 40, 7, 0.7, 120, 1.0);
    FitProblem fp;
    fp.dataset = generate_dataset(a, specs, a.reference_fitted, NoiseSpec{}, 7).dataset.trajectories;
    fp.config = a.config;
    fp.p_init = a.baseline;
    fp.constraints = ConstraintSet::standard(max_surge(fp.dataset));
    return fp;
  }();
  return p;
}

void BM_ResidualsSerial(benchmark::State& state) {
  const DatasetObjective obj(problem(), Execution::Serial);
  std::vector<double> r(obj.residual_count());
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj.residuals_serial(problem().p_init, r));
    benchmark::ClobberMemory();
  }
}

void BM_ResidualsParallel(benchmark::State& state) {
  const DatasetObjective obj(problem(), Execution::Parallel);
  std::vector<double> r(obj.residual_count());
  for (auto _ : state) {
    benchmark::DoNotOptimize(obj.residuals_parallel(problem().p_init, r));
    benchmark::ClobberMemory();
  }
}

void BM_JacobianSerial(benchmark::State& state) {
  const DatasetObjective obj(problem(), Execution::Serial);
  std::vector<double> r(obj.residual_count());
  obj.residuals_serial(problem().p_init, r);
  for (auto _ : state)
    benchmark::DoNotOptimize(obj.jacobian_serial(problem().p_init, r, 1e-6));
}

void BM_JacobianParallel(benchmark::State& state) {
  const DatasetObjective obj(problem(), Execution::Parallel);
  std::vector<double> r(obj.residual_count());
  obj.residuals_parallel(problem().p_init, r);
  for (auto _ : state)
    benchmark::DoNotOptimize(obj.jacobian_parallel(problem().p_init, r, 1e-6));
}

}  // namespace

BENCHMARK(BM_ResidualsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ResidualsParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_JacobianSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_JacobianParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
