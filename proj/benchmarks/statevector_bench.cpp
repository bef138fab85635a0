// Microbenchmarks for the kernels that dominate wall time: the per-layer
// statevector sweeps (exponential in qubit count), the reduction chain, and
// the exact oracle scan.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>

#include "qprosumer/exact.hpp"
#include "qprosumer/problem.hpp"
#include "qprosumer/qaoa.hpp"
#include "qprosumer/reduction.hpp"

using namespace qprosumer;

namespace {

IsingModel random_ising(int n) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  IsingModel model;
  model.num_spins = n;
  for (int i = 0; i < n; ++i) model.fields.push_back(coeff(rng));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng() % 3 == 0) model.couplings[{i, j}] = coeff(rng);
  model.offset = coeff(rng);
  return model;
}

void BM_PhaseSeparator(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiagonalHamiltonian diag = [&] {
    DiagonalHamiltonian d{random_ising(n)};
    d.materialize();
    return d;
  }();
  Statevector sv = initial_state(n, 24);
  for (auto _ : state) {
    apply_phase_separator(sv, diag, 0.37);
    benchmark::DoNotOptimize(sv.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sv.dim()));
}

void BM_Mixer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Statevector sv = initial_state(n, 24);
  for (auto _ : state) {
    apply_mixer(sv, 0.21);
    benchmark::DoNotOptimize(sv.amplitudes().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sv.dim()) *
                          n);
}

void BM_LazyEnergyExpectation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiagonalHamiltonian diag{random_ising(n)};  // not materialized
  const Statevector sv = initial_state(n, 24);
  for (auto _ : state) benchmark::DoNotOptimize(expectation(sv, diag));
}

void BM_MaterializedExpectation(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiagonalHamiltonian diag = [&] {
    DiagonalHamiltonian d{random_ising(n)};
    d.materialize();
    return d;
  }();
  const Statevector sv = initial_state(n, 24);
  for (auto _ : state) benchmark::DoNotOptimize(expectation(sv, diag));
}

void BM_ReductionChain(benchmark::State& state) {
  const ProsumerInstance instance =
      reference_instance(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const QuboModel qubo =
        qubo_from_ilp(build_ilp(instance), penalty_coefficient(instance));
    benchmark::DoNotOptimize(ising_from_qubo(qubo).fields.data());
  }
}

void BM_BruteForce(benchmark::State& state) {
  const IsingModel model = random_ising(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(brute_force_minimum(model).value);
}

}  // namespace

BENCHMARK(BM_PhaseSeparator)->DenseRange(8, 20, 4);
BENCHMARK(BM_Mixer)->DenseRange(8, 20, 4);
BENCHMARK(BM_LazyEnergyExpectation)->DenseRange(8, 16, 4);
BENCHMARK(BM_MaterializedExpectation)->DenseRange(8, 16, 4);
BENCHMARK(BM_ReductionChain)->DenseRange(3, 9, 3);
BENCHMARK(BM_BruteForce)->DenseRange(12, 20, 4);

BENCHMARK_MAIN();
