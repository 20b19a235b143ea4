#pragma once

// Data-parallel evaluation kernels for sampled certificates.
//
// Each kernel has a serial reference and an OpenMP version. Both write
// into an index-addressed buffer and reduce with the same index-ordered
// fold, so their results are bit-identical.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "petrocheck/domains.hpp"

namespace petrocheck {

enum class Exec { serial, parallel };

/// Tensor sample of the cusp in (y, t) with y = r / zeta(t).
struct SampleGrid {
  std::vector<double> t;  // time levels
  std::vector<double> y;  // normalised radii in [0, 1]

  std::size_t size() const { return t.size() * y.size(); }
};

/// n_t geometric levels t_i = t0 * ratio^{i+1} ending at t0 * t_frac, and
/// n_y uniform levels y_j = j/(n_y+1) (strict interior, axis excluded).
SampleGrid interior_grid(double t0, int n_t, int n_y, double t_frac);

/// out[i * y.size() + j] = g(y_j * zeta(t_i), t_i).
void evaluate_on_grid(const SampleGrid& grid, const DomainProfile& profile,
                      const std::function<double(double r, double t)>& g, std::span<double> out,
                      Exec exec = Exec::parallel);

struct Extremum {
  double value = 0.0;
  std::size_t index = 0;
};

/// Index-ordered fold: ties resolve to the smallest index.
Extremum fold_min(std::span<const double> values);
Extremum fold_max(std::span<const double> values);

/// Runs f(i) for i in [0, count); with Exec::parallel the iterations may run
/// concurrently, so f must only write to slots owned by i. An exception from
/// f is rethrown after the loop (lowest index first).
void for_each_index(std::size_t count, const std::function<void(std::size_t)>& f,
                    Exec exec = Exec::parallel);

}  // namespace petrocheck
