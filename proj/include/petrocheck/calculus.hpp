#pragma once

// Closed-form radial p-parabolic calculus.
//
// Every field is radial: u(x,t) = u(r,t) with r = |x|. The n-dimensional
// p-Laplacian then reads
//
//   Delta_p u = r^{1-n} d/dr ( r^{n-1} |u_r|^{p-2} u_r ),
//
// which follows from div(g(r) x/r) = r^{1-n} (r^{n-1} g)' for radial vector
// fields.

#include <functional>
#include <string>

namespace petrocheck {

/// A scalar field u(r,t) with optional closed-form derivatives.
///
/// `dt`, `dr` and `plap` are empty when no closed form is known; consumers
/// fall back to finite differences. `inside` (optional) restricts where eval
/// may be called; residual() raises DomainError outside it.
struct SpaceTimeFunction {
  using Field = std::function<double(double r, double t)>;

  Field eval;
  Field dt;
  Field dr;
  Field plap;
  std::function<bool(double r, double t)> inside;
  std::string label;

  double operator()(double r, double t) const { return eval(r, t); }
};

/// Delta_p(C r^alpha) = C alpha |C alpha|^{p-2} (n + (alpha-1)(p-1) - 1) r^{(alpha-1)(p-1)-1}.
/// Throws DomainError for r < 0, or r = 0 with a negative output exponent.
double p_laplacian_radial_power(double C, double alpha, double p, int n, double r);

/// Finite-difference settings for the independent p-Laplacian oracle.
struct FdOptions {
  double h = 1e-4;
  /// Regularisation (s^2 + eps^2)^{(p-2)/2} of |s|^{p-2}; only used when p < 2.
  double eps = 0.0;
};

/// Second-order central-difference approximation of Delta_p u at (r,t) built
/// from u.eval only. Meaningless at points where u is not smooth.
double p_laplacian_radial_fd(const SpaceTimeFunction& u, double p, int n, double r, double t,
                             const FdOptions& opts = {});

/// Central difference of u.eval in t with step h.
double time_derivative_fd(const SpaceTimeFunction& u, double r, double t, double h = 1e-6);

/// Barenblatt profile t^{-n/lambda} (C - k (r/t^{1/lambda})^{p/(p-1)})_+^{(p-1)/(p-2)}
/// with k = ((p-2)/p) lambda^{1/(1-p)}. Requires p != 2, lambda > 0, t > 0.
double barenblatt(double r, double t, double p, int n, double C);

/// Radius of the Barenblatt support at time t (infinity when p < 2).
double barenblatt_support_radius(double t, double p, int n, double C);

/// The Barenblatt profile as a SpaceTimeFunction with closed-form dt and dr.
/// No closed-form plap is attached: residuals use the oracle on the flux.
SpaceTimeFunction barenblatt_function(double p, int n, double C);

enum class ResidualMode {
  /// Use closed forms where attached, finite differences otherwise.
  prefer_closed_form,
  /// Ignore attached plap; compute it from dr (if present) or eval by differences.
  oracle,
};

/// Classical pointwise residual dt u - Delta_p u. Nonnegative means the point
/// behaves like a supersolution.
double residual(const SpaceTimeFunction& u, double p, int n, double r, double t,
                ResidualMode mode = ResidualMode::prefer_closed_form, const FdOptions& fd = {});

}  // namespace petrocheck
