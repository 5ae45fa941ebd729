#include <benchmark/benchmark.h>

#include <numbers>

#include "geophase/phases.hpp"
#include "geophase/wframe.hpp"

namespace {

using namespace geophase;

constexpr double kPi = std::numbers::pi;

const RotatingSpin kSpin{1.0, 1.0, kPi / 3.0};

HamiltonianSpec spec() { return HamiltonianSpec::rotating_spin(kSpin.mu_b, kSpin.omega, kSpin.theta); }

Trajectory trajectory(int steps) {
  return propagate(spec(), spin::rotating_solution(kSpin, Branch::plus, 0.0), TimeGrid(0.0, 2.0 * kPi, steps));
}

void BM_Propagate(benchmark::State& state) {
  const auto s = spec();
  const auto psi0 = spin::rotating_solution(kSpin, Branch::plus, 0.0);
  const TimeGrid grid(0.0, 2.0 * kPi, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(s, psi0, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Propagate)->Arg(1000)->Arg(20000)->Arg(200000)->Unit(benchmark::kMillisecond);

void BM_AaPhase(benchmark::State& state) {
  const auto traj = trajectory(static_cast<int>(state.range(0)));
  const auto verdict = check_cyclic(traj);
  for (auto _ : state) benchmark::DoNotOptimize(aa_phase(traj, verdict));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AaPhase)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_PhaseReport(benchmark::State& state) {
  const auto traj = trajectory(static_cast<int>(state.range(0)));
  const auto s = spec();
  for (auto _ : state) benchmark::DoNotOptimize(phase_report(traj, s));
}
BENCHMARK(BM_PhaseReport)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_BuildWFrame(benchmark::State& state) {
  const auto traj = trajectory(static_cast<int>(state.range(0)));
  const auto verdict = check_cyclic(traj);
  for (auto _ : state) benchmark::DoNotOptimize(build_w_frame(traj, verdict));
}
BENCHMARK(BM_BuildWFrame)->Arg(20000)->Unit(benchmark::kMillisecond);

void BM_EffectiveHamiltonian(benchmark::State& state) {
  const auto traj = trajectory(static_cast<int>(state.range(0)));
  const auto frame = build_w_frame(traj, check_cyclic(traj));
  const auto s = spec();
  for (auto _ : state) benchmark::DoNotOptimize(effective_hamiltonian(frame, s));
}
BENCHMARK(BM_EffectiveHamiltonian)->Arg(20000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
