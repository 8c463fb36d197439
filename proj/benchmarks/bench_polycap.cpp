#include <benchmark/benchmark.h>

#include <vector>

#include "polycap/capacity_engine.hpp"
#include "polycap/fem1d.hpp"
#include "polycap/fundamental_solutions.hpp"
#include "polycap/symbol_calculus.hpp"
#include "polycap/wiener_analyzer.hpp"

using namespace polycap;

namespace {

void BM_CoeffTable(benchmark::State& state) {
    const Dims d = make_dims(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(coeff_table(d, 60));
}
BENCHMARK(BM_CoeffTable)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_FundSol(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Dims d = make_dims(m, static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(fundsol(d));
}
BENCHMARK(BM_FundSol)->Args({2, 3})->Args({4, 5})->Args({6, 7})->Args({4, 4})->Args({6, 2})
    ->Unit(benchmark::kMillisecond);

void BM_ModeCapacity(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const Dims d = make_dims(m, 3);
    const RadialCompactum K({{0.5, 1.0}, {2.0, 2.0}});
    const Annulus A = make_annulus(0.1, 10.0);
    for (auto _ : state) benchmark::DoNotOptimize(mode_capacity(d, CapacityKind::dirichlet, 0, K, A));
}
BENCHMARK(BM_ModeCapacity)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_GapSolve(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    std::vector<double> c(m + 1, 1.0);
    MeshOptions o;
    o.h0 = 0.02;
    o.h_max = 0.2;
    const auto nodes = graded_mesh(3.0, o);
    std::vector<double> left(m, 0.0), right(m, 0.0);
    left[0] = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(solve_gap(c, nodes, left, right));
    state.counters["elements"] = static_cast<double>(nodes.size() - 1);
}
BENCHMARK(BM_GapSolve)->DenseRange(1, 6)->Unit(benchmark::kMillisecond);

void BM_WienerFull(benchmark::State& state) {
    const Dims d = make_dims(static_cast<int>(state.range(0)), 3);
    for (auto _ : state) benchmark::DoNotOptimize(wiener_terms(d, DomainModel::full(), 0, 9));
}
BENCHMARK(BM_WienerFull)->Arg(1)->Arg(3)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
