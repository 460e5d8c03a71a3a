// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "latticerec/autonomous.hpp"
#include "latticerec/kernels.hpp"

namespace lr = latticerec;

namespace {

// Two maps on {0..n-1} that agree everywhere except the last state, so the
// mismatch scan has to cover the whole space.
std::pair<lr::StepMap, lr::StepMap> nearly_equal_tables(std::int64_t n) {
  std::vector<std::int64_t> f(static_cast<std::size_t>(n));
  std::iota(f.begin(), f.end(), 1);
  f.back() = 0;
  std::vector<std::int64_t> g = f;
  g.back() = 1;
  return {lr::StepMap::table(f), lr::StepMap::table(g)};
}

lr::AutonomousSystem shift_system() {
  return lr::AutonomousSystem({lr::StepMap::affine(1, 3), lr::StepMap::affine(1, 5), lr::StepMap::affine(1, -2)});
}

lr::AutonomousSystem rotation_system() {
  std::vector<std::int64_t> r(97);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = static_cast<std::int64_t>((i + 7) % r.size());
  std::vector<std::int64_t> s(97);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = static_cast<std::int64_t>((i + 11) % s.size());
  return lr::AutonomousSystem({lr::StepMap::table(r), lr::StepMap::table(s)});
}

template <bool Parallel>
void BM_FirstMismatch(benchmark::State& state) {
  const auto n = state.range(0);
  auto [f, g] = nearly_equal_tables(n);
  for (auto _ : state) {
    auto hit = Parallel ? lr::parallel::first_mismatch(f, g, static_cast<std::uint64_t>(n))
                        : lr::serial::first_mismatch(f, g, static_cast<std::uint64_t>(n));
    benchmark::DoNotOptimize(hit);
  }
  state.SetItemsProcessed(state.iterations() * n);
}

template <bool Parallel>
void BM_PathEndpoints(benchmark::State& state) {
  const auto k = state.range(0);
  const lr::AutonomousSystem sys = rotation_system();
  const auto paths = lr::enumerate_monotone_paths(lr::MultiIndex{0, 0}, lr::MultiIndex{k, k}, 1'000'000);
  for (auto _ : state) {
    auto ends = Parallel ? lr::parallel::path_endpoints(sys, lr::State(3), paths)
                         : lr::serial::path_endpoints(sys, lr::State(3), paths);
    benchmark::DoNotOptimize(ends);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(paths.size()));
}

template <bool Parallel>
void BM_ClosedFormBox(benchmark::State& state) {
  const auto k = state.range(0);
  const lr::AutonomousSystem sys = shift_system();
  const lr::CompatibilityReport report = lr::check_compatibility(sys);
  const lr::MultiIndex lo{0, 0, 0};
  const lr::MultiIndex hi{k, k, k};
  const lr::State x0 = lr::State::integer(1);
  for (auto _ : state) {
    auto grid = Parallel ? lr::parallel::closed_form_box(sys, report, lo, x0, hi, {})
                         : lr::serial::closed_form_box(sys, report, lo, x0, hi, {});
    benchmark::DoNotOptimize(grid);
  }
  state.SetItemsProcessed(state.iterations() * (k + 1) * (k + 1) * (k + 1));
}

}  // namespace

BENCHMARK(BM_FirstMismatch<false>)->Name("first_mismatch/serial")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_FirstMismatch<true>)->Name("first_mismatch/parallel")->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_PathEndpoints<false>)->Name("path_endpoints/serial")->Arg(5)->Arg(7);
BENCHMARK(BM_PathEndpoints<true>)->Name("path_endpoints/parallel")->Arg(5)->Arg(7);
BENCHMARK(BM_ClosedFormBox<false>)->Name("closed_form_box/serial")->Arg(8)->Arg(16);
BENCHMARK(BM_ClosedFormBox<true>)->Name("closed_form_box/parallel")->Arg(8)->Arg(16);

BENCHMARK_MAIN();
