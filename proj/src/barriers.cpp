#include "petrocheck/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace petrocheck {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require_singular(double p, int n, const char* what) {
  if (!(p > 1.0 && p < 2.0)) throw DomainError(std::string(what) + ": requires 1 < p < 2");
  if (n < 1) throw DomainError(std::string(what) + ": requires n >= 1");
}

void require_degenerate(double p, int n, const char* what) {
  if (!(p > 2.0)) throw DomainError(std::string(what) + ": requires p > 2");
  if (n < 1) throw DomainError(std::string(what) + ": requires n >= 1");
}

void require_q_upto(double p, double q, const char* what) {
  if (!(q > 0.0) || q > 1.0 / p) throw DomainError(std::string(what) + ": requires 0 < q <= 1/p");
}

bool negative_time(double r, double t) { return r >= 0.0 && t < 0.0; }

Params make_params(double p, int n, std::optional<double> q) {
  Params prm;
  prm.p = p;
  prm.n = n;
  prm.q = q;
  prm.K = 1.0;
  prm.t0 = -1.0;
  return prm;
}

}  // namespace

std::string to_string(BarrierKind kind) {
  switch (kind) {
    case BarrierKind::singular_irregularity:
      return "singular_irregularity";
    case BarrierKind::singular_traditional:
      return "singular_traditional";
    case BarrierKind::degenerate_family_member:
      return "degenerate_family_member";
    case BarrierKind::degenerate_irregularity:
      return "degenerate_irregularity";
    case BarrierKind::degenerate_small_data:
      return "degenerate_small_data";
  }
  return "unknown";
}

BarrierKind barrier_kind_from_string(const std::string& name) {
  for (auto k : {BarrierKind::singular_irregularity, BarrierKind::singular_traditional,
                 BarrierKind::degenerate_family_member, BarrierKind::degenerate_irregularity,
                 BarrierKind::degenerate_small_data}) {
    if (to_string(k) == name) return k;
  }
  throw DomainError("unknown barrier kind '" + name + "'");
}

// ---------------------------------------------------------------------------
// Singular range 1 < p < 2

Barrier singular_irregularity_barrier(double p, double q, int n) {
  require_singular(p, n, "singular_irregularity_barrier");
  if (!(q > 0.0) || !(p * q < 1.0)) {
    throw DomainError("singular_irregularity_barrier: requires 0 < q < 1/p (1 - pq must be > 0)");
  }
  const double a = p / (p - 1.0);
  const double tq = p * q / (p - 1.0);
  const double c = n / (1.0 - p * q) * std::pow(a, p - 1.0);

  Barrier b;
  b.spec.kind = BarrierKind::singular_irregularity;
  b.spec.params = make_params(p, n, q);
  b.spec.constants = {{"axis_coefficient", c}, {"value_at_origin", 1.0}};
  b.domain = DomainProfile::power(1.0, q, -1.0);
  auto& u = b.u;
  u.label = "singular_irregularity";
  u.inside = negative_time;
  u.eval = [=](double r, double t) {
    if (r == 0.0 && t == 0.0) return 1.0;
    return std::pow(r, a) * std::pow(-t, -tq) - c * std::pow(-t, 1.0 - p * q);
  };
  u.dt = [=](double r, double t) {
    return tq * std::pow(r, a) * std::pow(-t, -tq - 1.0) + c * (1.0 - p * q) * std::pow(-t, -p * q);
  };
  u.dr = [=](double r, double t) { return a * std::pow(r, a - 1.0) * std::pow(-t, -tq); };
  u.plap = [=](double r, double t) {
    return p_laplacian_radial_power(std::pow(-t, -tq), a, p, n, r);
  };
  return b;
}

double b_const(double p, int n) {
  require_singular(p, n, "b_const");
  return std::min(n * (2.0 - p) * std::pow(p / (p - 1.0), p - 1.0), 1.0);
}

double m_const(double p, double q, int n) {
  require_singular(p, n, "m_const");
  require_q_upto(p, q, "m_const");
  const double B = b_const(p, n);
  return std::pow(0.5 * B, 1.0 + (p - 1.0) / (p * q * (2.0 - p)));
}

SpaceTimeFunction singular_traditional_v(double p, double q, int n) {
  require_singular(p, n, "singular_traditional_v");
  require_q_upto(p, q, "singular_traditional_v");
  const double B = b_const(p, n);
  const double a = p / (p - 1.0);
  const double e = 1.0 / (2.0 - p);
  SpaceTimeFunction v;
  v.label = "singular_traditional_v";
  v.inside = negative_time;
  v.eval = [=](double r, double t) { return std::pow(-t, e) * (B - std::pow(r, a)); };
  v.dt = [=](double r, double t) { return -e * std::pow(-t, e - 1.0) * (B - std::pow(r, a)); };
  v.dr = [=](double r, double t) { return -std::pow(-t, e) * a * std::pow(r, a - 1.0); };
  v.plap = [=](double r, double t) {
    return p_laplacian_radial_power(-std::pow(-t, e), a, p, n, r);
  };
  return v;
}

Barrier singular_traditional_barrier(double p, double q, int n) {
  const SpaceTimeFunction v = singular_traditional_v(p, q, n);
  const double B = b_const(p, n);
  const double M = m_const(p, q, n);
  const double a = p / (p - 1.0);

  Barrier b;
  b.spec.kind = BarrierKind::singular_traditional;
  b.spec.params = make_params(p, n, q);
  b.spec.constants = {{"B", B}, {"M", M}, {"inner_threshold", 0.5 * B}};
  b.domain = DomainProfile::power(1.0, q, -1.0);
  // On the smooth piece v < M inside Theta' the derivatives are those of v;
  // everywhere else u is the constant M.
  const auto on_v = [=](double r, double t) {
    return std::pow(r, a) < 0.5 * B && v.eval(r, t) < M;
  };
  auto& u = b.u;
  u.label = "singular_traditional";
  u.inside = negative_time;
  u.eval = [=](double r, double t) {
    if (std::pow(r, a) < 0.5 * B) return std::min(v.eval(r, t), M);
    return M;
  };
  u.dt = [=](double r, double t) { return on_v(r, t) ? v.dt(r, t) : 0.0; };
  u.dr = [=](double r, double t) { return on_v(r, t) ? v.dr(r, t) : 0.0; };
  u.plap = [=](double r, double t) { return on_v(r, t) ? v.plap(r, t) : 0.0; };
  return b;
}

SpaceTimeFunction small_data_bound_g(double p, double q, int n) {
  require_singular(p, n, "small_data_bound_g");
  require_q_upto(p, q, "small_data_bound_g");
  const double half_b = 0.5 * b_const(p, n);
  const double clamp = std::pow(half_b, (p - 1.0) / (p * q));
  const double e = 1.0 / (2.0 - p);
  SpaceTimeFunction g;
  g.label = "small_data_bound_g";
  g.inside = [](double r, double t) { return r >= 0.0 && t <= 0.0; };
  g.eval = [=](double, double t) { return half_b * std::pow(std::min(-t, clamp), e); };
  g.dt = [=](double, double t) {
    if (-t >= clamp) return 0.0;
    return -half_b * e * std::pow(-t, e - 1.0);
  };
  g.dr = [](double, double) { return 0.0; };
  g.plap = [](double, double) { return 0.0; };
  return g;
}

// ---------------------------------------------------------------------------
// Degenerate range p > 2

double degenerate_c_max(double p, int n) {
  require_degenerate(p, n, "degenerate_c_max");
  const double lam = lambda_of(p, n);
  return std::pow(std::pow(p - 2.0, p - 1.0) / (lam * std::pow(p, p - 1.0)), 1.0 / (p - 2.0));
}

Barrier degenerate_irregularity_barrier(double p, int n, double C) {
  const double cmax = degenerate_c_max(p, n);
  if (!(C > 0.0)) throw DomainError("degenerate_irregularity_barrier: requires C > 0");
  if (C > cmax * (1.0 + 1e-12)) {
    throw DomainError("degenerate_irregularity_barrier: C = " + fmt(C) +
                      " violates C^{p-2} <= (p-2)^{p-1}/(lambda p^{p-1}), i.e. C <= c_max = " +
                      fmt(cmax));
  }
  const double alpha = p / (p - 2.0);
  const double e = 1.0 / (p - 2.0);

  Barrier b;
  b.spec.kind = BarrierKind::degenerate_irregularity;
  b.spec.params = make_params(p, n, 1.0 / p);
  b.spec.constants = {{"C", C}, {"c_max", cmax}, {"value_at_origin", C}};
  b.domain = DomainProfile::power(1.0, 1.0 / p, -1.0);
  auto& u = b.u;
  u.label = "degenerate_irregularity";
  u.inside = negative_time;
  u.eval = [=](double r, double t) { return C * std::pow(r, alpha) * std::pow(-t, -e); };
  u.dt = [=](double r, double t) { return C * e * std::pow(r, alpha) * std::pow(-t, -e - 1.0); };
  u.dr = [=](double r, double t) {
    return C * alpha * std::pow(r, alpha - 1.0) * std::pow(-t, -e);
  };
  u.plap = [=](double r, double t) {
    return p_laplacian_radial_power(C * std::pow(-t, -e), alpha, p, n, r);
  };
  return b;
}

FamilyPieces family_pieces(double p, int n, const Gauge& gauge, double C, double r, double t) {
  const double lam = lambda_of(p, n);
  const double a = (p - 1.0) / (p - 2.0);
  const double e = 1.0 / (p - 2.0);
  const double kappa = (p - 2.0) / (p * std::pow(lam, 1.0 / (p - 1.0)));
  const double psi = std::pow(r / std::pow(-t, 1.0 / lam), p / (p - 1.0));
  const double delta = gauge.delta(t);
  const double Q = C + kappa * psi;
  const double f = -std::pow(delta, e) * std::pow(-t, -n / lam);
  const double rho = -std::pow(C, e) * delta * f;
  return {Q, f, rho, (std::pow(Q, a) - std::pow(C, a)) * f + rho};
}

Barrier degenerate_family_member(double p, int n, const Gauge& gauge, double C,
                                 std::optional<double> verified_C0,
                                 std::optional<DomainProfile> domain) {
  require_degenerate(p, n, "degenerate_family_member");
  if (!(C > 0.0)) throw DomainError("degenerate_family_member: requires C > 0");
  if (!gauge.has_derivative()) {
    throw DomainError("degenerate_family_member: gauge has no derivative (use monotone_smooth_envelope)");
  }
  if (!gauge.monotone_flag) {
    throw DomainError("degenerate_family_member: (-t)^{-beta} delta(t) must be nondecreasing");
  }
  const double lam = lambda_of(p, n);
  const double a = (p - 1.0) / (p - 2.0);
  const double e = 1.0 / (p - 2.0);
  const double kappa = (p - 2.0) / (p * std::pow(lam, 1.0 / (p - 1.0)));
  const double Ce = std::pow(C, e);
  const double Ca = std::pow(C, a);

  Barrier b;
  b.spec.kind = BarrierKind::degenerate_family_member;
  b.spec.params = make_params(p, n, std::nullopt);
  b.spec.constants = {{"C", C}, {"beta", gauge.beta}};
  if (verified_C0) {
    b.spec.constants["C0"] = *verified_C0;
    if (C < *verified_C0) {
      b.spec.warnings.push_back("C = " + fmt(C) + " is below the verified threshold C0 = " +
                                fmt(*verified_C0));
    }
  }
  b.domain = std::move(domain);

  auto& u = b.u;
  u.label = "degenerate_family_member";
  u.inside = negative_time;
  u.eval = [=](double r, double t) { return family_pieces(p, n, gauge, C, r, t).w; };
  u.dt = [=](double r, double t) {
    const auto k = family_pieces(p, n, gauge, C, r, t);
    const double s = -t;
    const double delta = gauge.delta(t);
    const double ddelta = gauge.ddelta(t);
    const double sn = std::pow(s, -n / lam);
    const double df = -(e * std::pow(delta, e - 1.0) * ddelta * sn +
                        std::pow(delta, e) * (n / lam) * sn / s);
    const double drho = Ce * (a * std::pow(delta, a - 1.0) * ddelta * sn +
                              std::pow(delta, a) * (n / lam) * sn / s);
    const double dQ = p * (k.Q - C) / (lam * (p - 1.0) * s);
    return (std::pow(k.Q, a) - Ca) * df + drho + a * k.f * std::pow(k.Q, e) * dQ;
  };
  u.dr = [=](double r, double t) {
    const auto k = family_pieces(p, n, gauge, C, r, t);
    const double dQ = kappa * (p / (p - 1.0)) * std::pow(r, 1.0 / (p - 1.0)) *
                      std::pow(-t, -p / (lam * (p - 1.0)));
    return a * k.f * std::pow(k.Q, e) * dQ;
  };
  // Delta_p w = n G + Q^{1/(p-2)} |f|^{p-2} f psi / (lambda^{p/(p-1)} (-t)^{p/lambda}),
  // G = Q^{(p-1)/(p-2)} |f|^{p-2} f / (lambda (-t)^{p/lambda}).
  u.plap = [=](double r, double t) {
    const auto k = family_pieces(p, n, gauge, C, r, t);
    const double s = -t;
    const double psi = std::pow(r / std::pow(s, 1.0 / lam), p / (p - 1.0));
    const double ff = std::pow(std::abs(k.f), p - 2.0) * k.f;
    const double sp = std::pow(s, p / lam);
    return n * std::pow(k.Q, a) * ff / (lam * sp) +
           std::pow(k.Q, e) * ff * psi / (std::pow(lam, p / (p - 1.0)) * sp);
  };
  return b;
}

Barrier degenerate_small_data_barrier(double p, double q, int n, double beta) {
  require_degenerate(p, n, "degenerate_small_data_barrier");
  require_q_upto(p, q, "degenerate_small_data_barrier");
  if (!(beta > 0.0)) throw DomainError("degenerate_small_data_barrier: requires beta > 0");
  if (!(beta < p * q)) {
    throw DomainError("degenerate_small_data_barrier: requires beta < pq (u would not be continuous at the origin)");
  }
  const double lam = lambda_of(p, n);
  const double alpha = p / (p - 2.0);
  const double e = 1.0 / (p - 2.0);
  const double A = std::pow(beta / lam * std::pow(1.0 - 2.0 / p, p - 1.0), e);

  Barrier b;
  b.spec.kind = BarrierKind::degenerate_small_data;
  b.spec.params = make_params(p, n, q);
  b.spec.constants = {{"A", A}, {"beta", beta}, {"value_at_origin", 0.0}};
  b.domain = DomainProfile::power(1.0, q, -1.0);
  auto& u = b.u;
  u.label = "degenerate_small_data";
  u.inside = negative_time;
  u.eval = [=](double r, double t) {
    if (r == 0.0 && t == 0.0) return 0.0;
    return A * std::pow(r, alpha) * std::pow(-t, -beta * e);
  };
  u.dt = [=](double r, double t) {
    return A * beta * e * std::pow(r, alpha) * std::pow(-t, -beta * e - 1.0);
  };
  u.dr = [=](double r, double t) {
    return A * alpha * std::pow(r, alpha - 1.0) * std::pow(-t, -beta * e);
  };
  u.plap = [=](double r, double t) {
    return p_laplacian_radial_power(A * std::pow(-t, -beta * e), alpha, p, n, r);
  };
  return b;
}

// ---------------------------------------------------------------------------
// Threshold search for the family index

FamilyConditions family_conditions(double p, int n, const Gauge& gauge, const DomainProfile& profile,
                                   const SampleGrid& grid, double C) {
  require_degenerate(p, n, "family_conditions");
  if (!gauge.has_derivative()) throw DomainError("family_conditions: gauge has no derivative");
  const double lam = lambda_of(p, n);
  const double a = (p - 1.0) / (p - 2.0);
  const double e = 1.0 / (p - 2.0);
  const double beta = gauge.beta;
  const double Ce = std::pow(C, e);
  const double Ca = std::pow(C, a);

  FamilyConditions out;
  out.C = C;
  out.c_condition =
      std::pow(2.0, e) / std::pow(lam, p / (p - 1.0)) - n * C / lam <= -beta;
  out.worst_q_ratio = -std::numeric_limits<double>::infinity();
  out.worst_elem_gap = -std::numeric_limits<double>::infinity();
  out.worst_h_bound = -std::numeric_limits<double>::infinity();
  out.worst_h_exact = -std::numeric_limits<double>::infinity();

  for (double t : grid.t) {
    const double s = -t;
    const double z = profile.zeta(t);
    const double delta = gauge.delta(t);
    const double ddelta = gauge.ddelta(t);
    const double bound = Ce * (-ddelta - beta * delta / s);
    const double bound_scale = Ce * (std::abs(ddelta) + beta * delta / s);
    out.worst_h_bound = std::max(out.worst_h_bound, bound / bound_scale);
    for (double y : grid.y) {
      const auto k = family_pieces(p, n, gauge, C, y * z, t);
      out.worst_q_ratio = std::max(out.worst_q_ratio, k.Q / (2.0 * C));
      out.worst_elem_gap =
          std::max(out.worst_elem_gap, (std::pow(k.Q, a) - Ca) - (p - 1.0) / p * Ce * delta);
      const double fabs_pm2 = std::pow(std::abs(k.f), p - 2.0);
      const double H = -Ce * ddelta + p * std::pow(k.Q, e) * (k.Q - C) / (lam * (p - 2.0) * s) -
                       n * std::pow(k.Q, a) * fabs_pm2 / (lam * std::pow(s, p / lam));
      out.worst_h_exact = std::max(out.worst_h_exact, H);
    }
  }
  out.q_sandwich = out.worst_q_ratio <= 1.0;
  out.elem_inequality = out.worst_elem_gap <= 0.0;
  out.h_nonpositive = out.worst_h_bound <= 1e-10;
  return out;
}

FamilyThreshold find_C0(double p, int n, const Gauge& gauge, const DomainProfile& profile,
                        const SampleGrid& grid, int max_doublings) {
  FamilyThreshold out;
  double C = 1.0;
  for (int k = 0; k <= max_doublings; ++k, C *= 2.0) {
    out.trail.push_back(family_conditions(p, n, gauge, profile, grid, C));
    if (out.trail.back().ok()) {
      out.C0 = C;
      out.doublings = k;
      out.theta = std::numeric_limits<double>::infinity();
      const auto h = gauge.weighted();
      for (std::size_t i = 0; i < gauge.t.size(); ++i) {
        if (gauge.t[i] > 0.5 * profile.t0()) out.theta = std::min(out.theta, h[i]);
      }
      return out;
    }
  }
  throw DomainError("find_C0: no admissible C found after " + std::to_string(max_doublings) +
                    " doublings");
}

}  // namespace petrocheck
