#include "petrocheck/grid_kernels.hpp"

#include <cmath>
#include <exception>

#include "petrocheck/params.hpp"

namespace petrocheck {

SampleGrid interior_grid(double t0, int n_t, int n_y, double t_frac) {
  if (n_t < 1 || n_y < 1) throw DomainError("sample grid must be nonempty");
  if (!(t0 < 0.0) || !(t_frac > 0.0 && t_frac < 1.0)) {
    throw DomainError("sample grid needs t0 < 0 and 0 < t_frac < 1");
  }
  SampleGrid grid;
  const double ratio = std::pow(t_frac, 1.0 / n_t);
  grid.t.resize(n_t);
  for (int i = 0; i < n_t; ++i) grid.t[i] = t0 * std::pow(ratio, i + 1);
  grid.t.back() = t0 * t_frac;
  grid.y.resize(n_y);
  for (int j = 0; j < n_y; ++j) grid.y[j] = static_cast<double>(j + 1) / (n_y + 1);
  return grid;
}

void evaluate_on_grid(const SampleGrid& grid, const DomainProfile& profile,
                      const std::function<double(double, double)>& g, std::span<double> out,
                      Exec exec) {
  const std::size_t nt = grid.t.size();
  const std::size_t ny = grid.y.size();
  if (out.size() != nt * ny) throw DomainError("evaluate_on_grid: output size mismatch");
  const auto row = [&](std::size_t i) {
    const double t = grid.t[i];
    const double z = profile.zeta(t);
    for (std::size_t j = 0; j < ny; ++j) out[i * ny + j] = g(grid.y[j] * z, t);
  };
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < nt; ++i) row(i);
    return;
  }
  const long long n = static_cast<long long>(nt);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < n; ++i) row(static_cast<std::size_t>(i));
}

Extremum fold_min(std::span<const double> values) {
  if (values.empty()) throw DomainError("fold_min: empty input");
  Extremum e{values[0], 0};
  for (std::size_t i = 1; i < values.size(); ++i) {
    // NaN compares false and would be skipped; treat it as the worst value.
    if (values[i] < e.value || (std::isnan(values[i]) && !std::isnan(e.value))) e = {values[i], i};
  }
  return e;
}

Extremum fold_max(std::span<const double> values) {
  if (values.empty()) throw DomainError("fold_max: empty input");
  Extremum e{values[0], 0};
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > e.value || (std::isnan(values[i]) && !std::isnan(e.value))) e = {values[i], i};
  }
  return e;
}

void for_each_index(std::size_t count, const std::function<void(std::size_t)>& f, Exec exec) {
  std::vector<std::exception_ptr> errors(count);
  const auto guarded = [&](std::size_t i) {
    try {
      f(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < count; ++i) guarded(i);
  } else {
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) guarded(static_cast<std::size_t>(i));
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace petrocheck
