#pragma once

// Radially symmetric implicit solver for dt u = Delta_p u on a cusp.
//
// The moving cusp {r < zeta(t)} is mapped to the fixed cylinder y in [0,1]
// with y = r/zeta(t). For U(y,t) = u(y zeta(t), t):
//
//   dt u|_r  = U_t - y (zeta'/zeta) U_y
//   Delta_p u = zeta^{-p} y^{1-n} (y^{n-1} |U_y|^{p-2} U_y)_y
//
// so the equation becomes U_t = (y zeta'/zeta) U_y + zeta^{-p} L_p U.
// Space: finite volumes on uniform y nodes with staggered fluxes, upwinded
// transport, symmetry at y = 0 and Dirichlet data at y = 1. Time: implicit
// Euler with a damped Newton solve per step (Picard fallback, then step
// halving). The discrete operator is monotone, so the discrete maximum and
// comparison principles hold for converged steps.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "petrocheck/domains.hpp"

namespace petrocheck {

/// Boundary datum f(r,t) on the parabolic boundary (bottom slice and lateral surface).
using BoundaryData = std::function<double(double r, double t)>;

struct SolverConfig {
  int n_y = 200;
  /// Flux regularisation (s^2 + eps_reg^2)^{(p-2)/2} s.
  double eps_reg = 1e-8;
  /// Marching stops at t = -eps_min; 0 selects 1e-4 |t0|.
  double eps_min = 0.0;
  /// dt_k <= c_step zeta(t_k)^p.
  double c_step = 0.5;
  /// dt_k <= geo_step (-t_k): geometric time grid towards 0.
  double geo_step = 0.02;
  int newton_max = 25;
  int picard_max = 200;
  /// Max-norm of the per-step residual (in units of u).
  double tol = 1e-10;
  int max_halvings = 6;
  /// Keep every time level; otherwise only the first and last rows are kept.
  bool store_all = true;

  bool operator==(const SolverConfig&) const = default;
};

double resolved_eps_min(const SolverConfig& config, double t0);

/// Discrete solution on the (y,t) tensor grid of the fixed cylinder.
struct GridField {
  std::vector<double> y;
  std::vector<double> t;
  /// Row-major values[it * y.size() + iy]; rows for every t when stored.
  std::vector<double> values;
  std::vector<double> stored_t;
  double p = 2.0;
  int n = 1;
  DomainProfile profile = DomainProfile::power(1.0, 1.0);
  /// u(0, t_k) for every time level.
  std::vector<std::pair<double, double>> axis_trace;
  double boundary_min = 0.0;
  double boundary_max = 0.0;
  double value_min = 0.0;
  double value_max = 0.0;
  int newton_iterations = 0;
  int picard_fallbacks = 0;
  int halvings = 0;

  std::size_t rows() const { return stored_t.size(); }
  double at(std::size_t row, std::size_t iy) const { return values[row * y.size() + iy]; }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * y.size(), y.size()};
  }
  /// min boundary - tol <= u <= max boundary + tol.
  bool max_principle_holds(double tol = 1e-10) const;
};

/// Coefficients of the transformed equation U_t = advection U_y + diffusion_scale L_p U.
struct TransformCoefficients {
  std::function<double(double y, double t)> advection;  // y zeta'(t)/zeta(t)
  std::function<double(double t)> diffusion_scale;      // zeta(t)^{-p}
};

TransformCoefficients transform_pde(const DomainProfile& profile, double p, int n);

/// U(y,t) = u(y zeta(t), t) and back.
std::function<double(double, double)> to_fixed(const DomainProfile& profile,
                                              std::function<double(double, double)> u);
std::function<double(double, double)> to_physical(const DomainProfile& profile,
                                                 std::function<double(double, double)> U);

/// Residual U_t - advection U_y - zeta^{-p} L_p U by central differences with step h.
double transformed_residual(const std::function<double(double, double)>& U,
                            const DomainProfile& profile, double p, int n, double y, double t,
                            double h = 1e-4);

/// Next time level after t under the step caps, landing exactly on t_end.
double next_time(const DomainProfile& profile, double p, double t, double t_end,
                 const SolverConfig& config);

/// Implicit march from profile.t0() to -eps_min with Dirichlet data f.
GridField solve_dirichlet(const DomainProfile& profile, double p, int n, const BoundaryData& f,
                          const SolverConfig& config = {});

/// Same march started at t_start from nodal values `initial` (size n_y+1);
/// f supplies the lateral data.
GridField solve_dirichlet_from(const DomainProfile& profile, double p, int n, const BoundaryData& f,
                               double t_start, std::span<const double> initial,
                               const SolverConfig& config = {});

// ---------------------------------------------------------------------------
// Boundary-behaviour probe and the regularity table

struct LadderLevel {
  double eps_min;
  int n_y;
  double c_step;
  double geo_step;
};

/// eps_min in {1e-2, 1e-3, 1e-4} |t0| with n_y, c_step and geo_step refined by 2 per level.
std::vector<LadderLevel> default_ladder(double t0);

/// f(x,t) = min{1, |(x,t)| / 0.1}; f(0,0) = 0.
BoundaryData default_probe();

enum class Trend { attains, gap, inconclusive };
std::string to_string(Trend trend);

struct TrendThresholds {
  double attains_endpoint = 0.1;
  double attains_ratio = 0.8;
  double gap_relative = 0.1;
  double gap_floor = 0.2;
};

/// attains: last endpoint < attains_endpoint and each successive ratio < attains_ratio.
/// gap: the last two refinements move the endpoint by at most gap_relative
/// and the last endpoint is >= gap_floor. Fewer than 3 levels: inconclusive.
Trend classify_trend(std::span<const double> endpoints, const TrendThresholds& th = {});

struct ProbeResult {
  std::vector<LadderLevel> ladder;
  std::vector<std::vector<std::pair<double, double>>> traces;
  std::vector<double> endpoints;
  Trend trend = Trend::inconclusive;
  TrendThresholds thresholds;
  std::string note;
};

/// Runs the ladder (levels solved independently, possibly in parallel) and
/// classifies u(0, -eps_min). Reports inconclusive by policy for power
/// profiles with 1 < p < 2 and q = 1/p.
ProbeResult probe_origin(const DomainProfile& profile, double p, int n, const BoundaryData& f,
                         const std::vector<LadderLevel>& ladder, const SolverConfig& base = {},
                         const TrendThresholds& thresholds = {});

enum class Verdict { regular, irregular, unknown };
std::string to_string(Verdict verdict);

struct RegularityVerdict {
  Verdict theorem_verdict = Verdict::unknown;
  std::vector<std::pair<double, double>> numeric_trace;
  std::optional<Trend> numeric_trend;
  std::vector<double> endpoints;
  std::vector<std::string> certificate_refs;
  std::string warning;
};

/// Regularity of (0,0) for |x| < K(-t)^q, -1 < t < 0:
///   p > 2: regular iff q > 1/p;  p = 2: regular iff q >= 1/2;
///   1 < p < 2: regular if q > 1/p, irregular if q < 1/p, unknown at q = 1/p.
/// q is compared with 1/p at relative tolerance 1e-12.
RegularityVerdict classify(double p, double q);

}  // namespace petrocheck
