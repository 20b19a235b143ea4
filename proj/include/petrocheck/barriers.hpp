#pragma once

// Explicit barrier constructions for the p-parabolic equation on cusps.
//
// Every barrier carries closed-form dt, dr and plap so that residual signs
// can be certified without finite-difference noise. Reference domains are
// the normalised cusps |x| < (-t)^q, -1 < t < 0 (other amplitudes follow by
// scale_domain).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "petrocheck/calculus.hpp"
#include "petrocheck/domains.hpp"
#include "petrocheck/grid_kernels.hpp"
#include "petrocheck/params.hpp"

namespace petrocheck {

enum class BarrierKind {
  singular_irregularity,
  singular_traditional,
  degenerate_family_member,
  degenerate_irregularity,
  degenerate_small_data,
};

std::string to_string(BarrierKind kind);
BarrierKind barrier_kind_from_string(const std::string& name);

struct BarrierSpec {
  BarrierKind kind = BarrierKind::singular_irregularity;
  Params params;
  /// Named constants (B, M, C, A, beta, c_max, ...) as used by the formulas.
  std::map<std::string, double> constants;
  std::vector<std::string> warnings;
};

struct Barrier {
  BarrierSpec spec;
  SpaceTimeFunction u;
  /// Domain on which the supersolution property is asserted.
  std::optional<DomainProfile> domain;
};

/// u = r^{p/(p-1)} / (-t)^{pq/(p-1)} - (n/(1-pq)) (p/(p-1))^{p-1} (-t)^{1-pq},
/// with u(0,0) = 1. Requires 1 < p < 2 and 0 < q < 1/p.
Barrier singular_irregularity_barrier(double p, double q, int n);

/// B = min{n(2-p)(p/(p-1))^{p-1}, 1}; requires 1 < p < 2.
double b_const(double p, int n);
/// M = (B/2)^{1 + (p-1)/(pq(2-p))}; requires 1 < p < 2, 0 < q <= 1/p.
double m_const(double p, double q, int n);

/// v = (-t)^{1/(2-p)} (B - r^{p/(p-1)}), before pasting.
SpaceTimeFunction singular_traditional_v(double p, double q, int n);
/// Pasted traditional barrier: min{v, M} where r^{p/(p-1)} < B/2, M elsewhere.
Barrier singular_traditional_barrier(double p, double q, int n);

/// g = (B/2) min{-t, (B/2)^{(p-1)/(pq)}}^{1/(2-p)}; independent of r.
SpaceTimeFunction small_data_bound_g(double p, double q, int n);

/// ((p-2)^{p-1} / (lambda p^{p-1}))^{1/(p-2)}; requires p > 2.
double degenerate_c_max(double p, int n);
/// u = C (r^p / (-t))^{1/(p-2)} on |x| < (-t)^{1/p}. Requires p > 2, 0 < C <= c_max.
Barrier degenerate_irregularity_barrier(double p, int n, double C);

/// Pieces of the family member w_C = (Q^a - C^a) f + rho_C, a = (p-1)/(p-2).
struct FamilyPieces {
  double Q;
  double f;
  double rho;
  double w;
};
FamilyPieces family_pieces(double p, int n, const Gauge& gauge, double C, double r, double t);

/// w_C with Q = C + ((p-2)/(p lambda^{1/(p-1)})) (r/(-t)^{1/lambda})^{p/(p-1)},
/// f = -delta^{1/(p-2)} (-t)^{-n/lambda}, rho = -C^{1/(p-2)} delta f.
/// Requires p > 2 and a monotone gauge with a derivative. When verified_C0 is
/// given and C < verified_C0 the spec records a warning.
Barrier degenerate_family_member(double p, int n, const Gauge& gauge, double C,
                                 std::optional<double> verified_C0 = std::nullopt,
                                 std::optional<DomainProfile> domain = std::nullopt);

/// A = ((beta/lambda)(1-2/p)^{p-1})^{1/(p-2)}; u = A (r^p/(-t)^beta)^{1/(p-2)}.
/// Requires p > 2, 0 < q <= 1/p, 0 < beta < pq.
Barrier degenerate_small_data_barrier(double p, double q, int n, double beta);

/// Outcome of the sampled "C large enough" conditions at one C.
struct FamilyConditions {
  double C = 0.0;
  /// max Q/(2C) over the grid; the sandwich needs <= 1.
  double worst_q_ratio = 0.0;
  /// max of (Q^a - C^a) - ((p-1)/p) C^{1/(p-2)} delta.
  double worst_elem_gap = 0.0;
  /// max of the bound C^{1/(p-2)} [-delta' - beta delta/(-t)] (relative to its scale).
  double worst_h_bound = 0.0;
  /// max of H itself, for the record.
  double worst_h_exact = 0.0;
  /// 2^{1/(p-2)}/lambda^{p/(p-1)} - nC/lambda <= -beta.
  bool c_condition = false;
  bool q_sandwich = false;
  bool elem_inequality = false;
  bool h_nonpositive = false;

  bool ok() const { return c_condition && q_sandwich && elem_inequality && h_nonpositive; }
};

FamilyConditions family_conditions(double p, int n, const Gauge& gauge, const DomainProfile& profile,
                                   const SampleGrid& grid, double C);

struct FamilyThreshold {
  double C0 = 0.0;
  int doublings = 0;
  /// min of (-t)^{-beta} delta(t) over gauge samples with t > t0/2.
  double theta = 0.0;
  std::vector<FamilyConditions> trail;
};

/// Doubling search from C = 1 for the first C meeting family_conditions.
/// Throws DomainError if max_doublings is exhausted.
FamilyThreshold find_C0(double p, int n, const Gauge& gauge, const DomainProfile& profile,
                        const SampleGrid& grid, int max_doublings = 60);

}  // namespace petrocheck
