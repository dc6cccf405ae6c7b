// Microbenchmarks for the hot paths: the three evaluator routes, dense
// contraction, root scanning, enumeration with classification, the window
// chain, and trace sampling.

#include <benchmark/benchmark.h>

#include <vector>

#include "tpt/analytic.hpp"
#include "tpt/simulate.hpp"
#include "tpt/solvers.hpp"
#include "tpt/tensor.hpp"

namespace {

using tpt::SymmetricFamily2;

void BM_ReducedFirstDirect(benchmark::State& state) {
  SymmetricFamily2 f(static_cast<int>(state.range(0)), 0.8);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpt::reduced_first_direct(f, x));
    x += 1e-4;
    if (x > 1.0) x = 0.0;
  }
}
BENCHMARK(BM_ReducedFirstDirect)->Arg(3)->Arg(12)->Arg(25)->Arg(57);

void BM_ReducedFirstClosed(benchmark::State& state) {
  SymmetricFamily2 f(static_cast<int>(state.range(0)), 0.8);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpt::reduced_first_closed(f, x));
    x += 1e-4;
    if (x > 1.0) x = 0.0;
  }
}
BENCHMARK(BM_ReducedFirstClosed)->Arg(3)->Arg(25)->Arg(301);

void BM_PolynomialEvaluate(benchmark::State& state) {
  tpt::ReducedPolynomial poly =
      tpt::reduced_first_coefficients(SymmetricFamily2(static_cast<int>(state.range(0)), 0.8));
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(poly.evaluate(x));
    x += 1e-4;
    if (x > 1.0) x = 0.0;
  }
}
BENCHMARK(BM_PolynomialEvaluate)->Arg(10)->Arg(40);

void BM_Contract(benchmark::State& state) {
  SymmetricFamily2 f(static_cast<int>(state.range(0)), 0.8);
  tpt::TransitionTensor t = f.materialize();
  std::vector<double> v{0.3, 0.7};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpt::contract(t, v));
  }
  state.SetComplexityN(static_cast<int64_t>(t.entries().size()));
}
BENCHMARK(BM_Contract)->Arg(4)->Arg(10)->Arg(16);

void BM_RootScan(benchmark::State& state) {
  SymmetricFamily2 f(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tpt::root_scan([&f](double x) { return tpt::stationary_defect(f, x); }, 10001));
  }
}
BENCHMARK(BM_RootScan)->Arg(3)->Arg(25);

void BM_Classify(benchmark::State& state) {
  SymmetricFamily2 f(static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpt::classify(f));
  }
}
BENCHMARK(BM_Classify)->Arg(3)->Arg(25)->Arg(301);

void BM_MatrixStationary(benchmark::State& state) {
  tpt::LiftedChain chain(SymmetricFamily2(static_cast<int>(state.range(0)), 0.7));
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpt::matrix_stationary(chain));
  }
}
BENCHMARK(BM_MatrixStationary)->Arg(5)->Arg(13)->Arg(21);

void BM_SampleChain(benchmark::State& state) {
  SymmetricFamily2 f(4, 0.6);
  std::vector<int> window{1, 1, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        tpt::sample_chain(f, window, static_cast<std::uint64_t>(state.range(0)), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SampleChain)->Arg(1000)->Arg(100000);

void BM_FixedPointIterate(benchmark::State& state) {
  SymmetricFamily2 f(static_cast<int>(state.range(0)), 0.6);
  std::vector<double> x0{0.9, 0.1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(tpt::fixed_point_iterate(f, x0));
  }
}
BENCHMARK(BM_FixedPointIterate)->Arg(3)->Arg(25)->Arg(80);

}  // namespace

BENCHMARK_MAIN();
