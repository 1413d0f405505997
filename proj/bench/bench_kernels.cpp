// Parallel kernels against their serial references.

#include "thermo/noisy.hpp"
#include "thermo/thermal.hpp"

#include <benchmark/benchmark.h>

using namespace thermo;

namespace {

ThermalSetup qubit_oscillator(std::size_t m) {
    return build_setup(Hamiltonian::qubit(1.0, 0.7), Hamiltonian::oscillator(m, 1.0, 0.7));
}

void BM_ReachableFactored(benchmark::State& state) {
    const ThermalSetup s = qubit_oscillator(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(classical_reachable_set(ProbabilityVector{0.9, 0.1}, s).points.size());
}

void BM_ReachableSerial(benchmark::State& state) {
    const ThermalSetup s = qubit_oscillator(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(classical_reachable_set_serial(ProbabilityVector{0.9, 0.1}, s).points.size());
}

void BM_ThreeLevelPresetFactored(benchmark::State& state) {
    const Hamiltonian ha = Hamiltonian::from_weights({Rational(5, 20), Rational(7, 20), Rational(8, 20)});
    const ThermalSetup s = build_setup(ha, copies(ha, 2));
    for (auto _ : state) benchmark::DoNotOptimize(classical_reachable_set(ProbabilityVector{0.65, 0.22, 0.13}, s).points.size());
}

void BM_ThreeLevelPresetSampled(benchmark::State& state) {
    const Hamiltonian ha = Hamiltonian::from_weights({Rational(5, 20), Rational(7, 20), Rational(8, 20)});
    const ThermalSetup s = build_setup(ha, copies(ha, 2));
    const EnumerationOptions opts{1'000'000, true, static_cast<std::size_t>(state.range(0)), 0};
    for (auto _ : state) benchmark::DoNotOptimize(classical_reachable_set_serial(ProbabilityVector{0.65, 0.22, 0.13}, s, opts).points.size());
}

void BM_RankParallel(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(max_output_rank_bound(9, 3, static_cast<std::size_t>(state.range(0)), 1));
}

void BM_RankSerial(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(max_output_rank_bound_serial(9, 3, static_cast<std::size_t>(state.range(0)), 1));
}

}  // namespace

BENCHMARK(BM_ReachableFactored)->Arg(10)->Arg(14)->Arg(17)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ReachableSerial)->Arg(10)->Arg(14)->Arg(17)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThreeLevelPresetFactored)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ThreeLevelPresetSampled)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankParallel)->Arg(1000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankSerial)->Arg(1000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
