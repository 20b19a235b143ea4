#pragma once

// Sampled certificates for pointwise inequalities, barrier-family
// conditions, scaling equivariance and discrete comparison.
//
// Every report is a finite-sample statement: it records the worst sampled
// value and where it occurred, never a proof.

#include <optional>
#include <string>
#include <vector>

#include "petrocheck/barriers.hpp"
#include "petrocheck/calculus.hpp"
#include "petrocheck/domains.hpp"
#include "petrocheck/grid_kernels.hpp"
#include "petrocheck/solver.hpp"

namespace petrocheck {

enum class Sense { nonnegative, nonpositive };
std::string to_string(Sense sense);

struct GridMeta {
  int n_t = 0;
  int n_y = 0;
  double t_first = 0.0;
  double t_last = 0.0;
  std::string spacing;
};

struct CertificateReport {
  std::string subject;
  std::string condition;
  GridMeta grid;
  /// Minimum (nonnegative sense) or maximum (nonpositive sense) sampled value.
  double worst_violation = 0.0;
  double worst_r = 0.0;
  double worst_t = 0.0;
  bool pass = false;
  double tolerance = 0.0;
  Sense sense = Sense::nonnegative;
  bool finite_sample = true;
  /// Set when the sample could not decide the condition (never a pass).
  bool inconclusive = false;
  std::string note;
};

/// pass <=> worst >= -tol (nonnegative) or worst <= tol (nonpositive); NaN fails.
bool passes(double worst, Sense sense, double tol);

/// The default certificate grid: 128 geometric time levels down to t0 * 1e-4
/// and 128 interior y levels.
SampleGrid certificate_grid(const DomainProfile& profile, int n_t = 128, int n_y = 128,
                            double t_frac = 1e-4);

GridMeta describe_grid(const SampleGrid& grid);

/// Sign of the residual dt u - Delta_p u over the grid points of Theta.
/// Throws DomainError on an empty grid.
CertificateReport check_sign(const SpaceTimeFunction& u, const DomainProfile& profile, double p,
                             int n, const SampleGrid& grid, Sense sense, double tol = 1e-10,
                             Exec exec = Exec::parallel, const std::string& subject = "");

/// -u with derivatives negated.
SpaceTimeFunction negate(const SpaceTimeFunction& u);

struct FamilyMember {
  double index = 0.0;
  SpaceTimeFunction w;
};

struct FamilySampleConfig {
  int rays = 8;
  /// Decay samples t_m = t0 decay_ratio^m down to t0 * decay_t_frac.
  double decay_ratio = 0.1;
  double decay_t_frac = 1e-12;
  /// Samples on the bottom slice and on the lateral surface.
  int boundary_samples = 256;
  double lateral_t_frac = 1e-8;
  int k_max = 4;
  /// The decay envelope must fall below this fraction of its maximum.
  double decay_fraction = 1e-2;
  double residual_tol = 1e-10;
  SampleGrid grid;
  Exec exec = Exec::parallel;
};

struct FamilyReport {
  /// positivity, supersolution, decay, growth.
  std::vector<CertificateReport> conditions;
  /// j_of_k[k-1]: smallest member index whose boundary infimum on |xi| >= 1/k is >= k.
  std::vector<std::optional<int>> j_of_k;

  bool pass() const;
};

/// Conditions (i)-(iii) of a barrier family at (0,0) on finite samples.
/// Throws DomainError for an empty family.
FamilyReport check_barrier_family(const std::vector<FamilyMember>& family,
                                  const DomainProfile& profile, double p, int n,
                                  const FamilySampleConfig& config);

/// Sandwich C <= Q <= 2C and the lower bound
/// w_C >= (1/p) C^{1/(p-2)} delta^{(p-1)/(p-2)} (-t)^{-n/lambda} on the grid.
std::vector<CertificateReport> check_family_bounds(double p, int n, const Gauge& gauge,
                                                   const DomainProfile& profile,
                                                   const SampleGrid& grid, double C,
                                                   Exec exec = Exec::parallel);

struct FamilyCertificate {
  Gauge gauge;
  FamilyThreshold threshold;
  std::vector<double> ladder;
  FamilyReport family;
  /// check_family_bounds for every ladder member.
  std::vector<CertificateReport> bounds;

  bool pass() const;
};

/// Envelope gauge, find_C0, the ladder C0 2^j (j < ladder_size), family
/// conditions (i)-(iii) and the bounds for every member.
FamilyCertificate certify_family(double p, int n, const DomainProfile& profile,
                                 const SampleGrid& grid, int k_max = 4, int ladder_size = 9,
                                 Exec exec = Exec::parallel);

/// Solves on Theta~ = a Theta with data f~ and on Theta with f(x,t) = K f~(a x, t),
/// K = a^{-p/(p-2)}, and reports max |u - K u~(a x, t)| / max |u| over the
/// Theta run's nodes (u~ interpolated linearly in t).
CertificateReport check_scaling_equivariance(const DomainProfile& profile, double p, int n,
                                             double a, const BoundaryData& f_tilde,
                                             const SolverConfig& config = {},
                                             double tol = 1e-3);

/// Solves with f1 <= f2 and reports max(u1 - u2) over all nodes.
/// Throws DomainError if f1 > f2 at a boundary node.
CertificateReport check_comparison(const DomainProfile& profile, double p, int n,
                                   const BoundaryData& f1, const BoundaryData& f2,
                                   const SolverConfig& config = {}, double tol = 1e-10);

struct WitnessReport {
  /// max(solution - barrier) over all nodes.
  CertificateReport below_barrier;
  /// solution(0, -eps_min) - fraction * f(0,0).
  CertificateReport origin_gap;
  double f_origin = 0.0;
  double endpoint = 0.0;
};

/// Boundary data f = u on the parabolic boundary, f(0,0) = u(0,0); the
/// discrete solution should stay below u and away from f(0,0) at the axis.
WitnessReport check_irregularity_witness(const Barrier& barrier, const SolverConfig& config = {},
                                         double tol = 1e-6, double fraction = 0.5);

}  // namespace petrocheck
