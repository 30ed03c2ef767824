// Microbenchmarks for the three engines and the plan executor.  Sizes are
// chosen so a full run stays under a minute on a laptop.

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "loslap/lattice.hpp"
#include "loslap/matrix.hpp"
#include "loslap/permanent.hpp"
#include "loslap/slos.hpp"
#include "loslap/steiner.hpp"

namespace {

using namespace loslap;

void BM_LatticeDistribution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix u = haar_random_unitary(n, 1);
  for (auto _ : state) {
    cplx sink{};
    iterate_amplitudes(u, n, [&](const FockState&, cplx a) {
      sink += a;
      return true;
    });
    benchmark::DoNotOptimize(sink);
  }
  state.SetLabel("n = m = " + std::to_string(n));
}
BENCHMARK(BM_LatticeDistribution)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_ExpansionDistribution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix u = haar_random_unitary(n, 1);
  for (auto _ : state) {
    const SlosResult result = slos_full(u, n);
    benchmark::DoNotOptimize(result.amplitudes.data());
  }
  state.SetLabel("n = m = " + std::to_string(n));
}
BENCHMARK(BM_ExpansionDistribution)->Arg(4)->Arg(6)->Arg(8)->Arg(10);

void BM_PermanentDistribution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix u = haar_random_unitary(n, 1);
  for (auto _ : state) {
    const auto dist = full_distribution_naive(u, n);
    benchmark::DoNotOptimize(dist.size());
  }
  state.SetLabel("n = m = " + std::to_string(n));
}
BENCHMARK(BM_PermanentDistribution)->Arg(4)->Arg(6)->Arg(8);

void BM_BandUpdate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int level = static_cast<int>(state.range(1));
  const ComplexMatrix u = haar_random_unitary(n, 1);
  std::vector<cplx> v(1ull << n, cplx(1.0, 0.5));
  for (auto _ : state) {
    update_coefficients(u, 0, level, v);
    benchmark::DoNotOptimize(v.data());
  }
  state.SetLabel("n = " + std::to_string(n) + ", level = " + std::to_string(level));
}
BENCHMARK(BM_BandUpdate)->Args({10, 1})->Args({10, 5})->Args({10, 10})->Args({14, 7});

void BM_PlanExecution(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ComplexMatrix u = haar_random_unitary(n, 1);
  const PartitionGraph g = build_partition_graph(n, n);
  const TraversalPlan plan = n <= 7 ? solve_exact(g) : solve_greedy(g);
  for (auto _ : state) {
    cplx sink{};
    execute_plan(u, plan, [&](const FockState&, cplx a) {
      sink += a;
      return true;
    });
    benchmark::DoNotOptimize(sink);
  }
  state.SetLabel("n = m = " + std::to_string(n) + ", weight " + plan.total_weight.get_str());
}
BENCHMARK(BM_PlanExecution)->Arg(6)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
