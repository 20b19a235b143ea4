#include <benchmark/benchmark.h>

#include <cmath>

#include "petrocheck/barriers.hpp"
#include "petrocheck/solver.hpp"
#include "petrocheck/verify.hpp"

using namespace petrocheck;

namespace {

Exec exec_of(const benchmark::State& state) {
  return state.range(1) == 0 ? Exec::serial : Exec::parallel;
}

void BM_CheckSign(benchmark::State& state) {
  const auto b = singular_irregularity_barrier(1.5, 0.25, 2);
  const int m = static_cast<int>(state.range(0));
  const auto grid = certificate_grid(*b.domain, m, m);
  for (auto _ : state) {
    auto rep = check_sign(b.u, *b.domain, 1.5, 2, grid, Sense::nonnegative, 1e-10, exec_of(state));
    benchmark::DoNotOptimize(rep.worst_violation);
  }
  state.SetItemsProcessed(state.iterations() * m * m);
}
BENCHMARK(BM_CheckSign)->ArgNames({"m", "parallel"})->ArgsProduct({{128, 512}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_FamilyConditions(benchmark::State& state) {
  const auto prof = DomainProfile::power(1.0, 0.5);
  const auto g = enveloped_gauge(prof, 3.0, 1);
  const auto grid = certificate_grid(prof, 128, 128);
  const auto th = find_C0(3.0, 1, g, prof, grid);
  const auto w = degenerate_family_member(3.0, 1, g, th.C0, th.C0, prof);
  for (auto _ : state) {
    auto rep = check_sign(w.u, prof, 3.0, 1, grid, Sense::nonnegative, 1e-10, exec_of(state));
    benchmark::DoNotOptimize(rep.worst_violation);
  }
}
BENCHMARK(BM_FamilyConditions)->ArgNames({"m", "parallel"})->ArgsProduct({{128}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_EvaluateOnGrid(benchmark::State& state) {
  const auto prof = DomainProfile::power(1.0, 0.5);
  const int m = static_cast<int>(state.range(0));
  const auto grid = certificate_grid(prof, m, m);
  std::vector<double> out(grid.t.size() * grid.y.size());
  const auto f = [](double r, double t) { return std::exp(-r * r / -t) * std::cos(r + t); };
  for (auto _ : state) {
    evaluate_on_grid(grid, prof, f, out, exec_of(state));
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_EvaluateOnGrid)->ArgNames({"m", "parallel"})->ArgsProduct({{128, 1024}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
