#include "petrocheck/calculus.hpp"

#include <cmath>
#include <limits>

#include "petrocheck/params.hpp"

namespace petrocheck {

namespace {

// |s|^{p-2} s, optionally regularised as (s^2 + eps^2)^{(p-2)/2} s when p < 2.
double flux(double s, double p, double eps) {
  if (s == 0.0) return 0.0;
  if (p < 2.0 && eps > 0.0) return std::pow(s * s + eps * eps, 0.5 * (p - 2.0)) * s;
  return std::pow(std::abs(s), p - 2.0) * s;
}

struct BarenblattShape {
  double lam;
  double k;     // ((p-2)/p) lambda^{1/(1-p)}
  double expo;  // (p-1)/(p-2)
};

BarenblattShape barenblatt_shape(double p, int n) {
  if (p == 2.0) throw DomainError("barenblatt: p = 2 (Gaussian kernel) is not supported");
  const double lam = lambda_of(p, n);
  if (!(lam > 0.0)) throw DomainError("barenblatt: requires lambda = n(p-2)+p > 0");
  return {lam, (p - 2.0) / p * std::pow(lam, 1.0 / (1.0 - p)), (p - 1.0) / (p - 2.0)};
}

}  // namespace

double p_laplacian_radial_power(double C, double alpha, double p, int n, double r) {
  if (r < 0.0) throw DomainError("p_laplacian_radial_power: r must be >= 0");
  const double out_exp = (alpha - 1.0) * (p - 1.0) - 1.0;
  const double ca = C * alpha;
  const double coeff = n + (alpha - 1.0) * (p - 1.0) - 1.0;
  if (ca == 0.0 || coeff == 0.0) return 0.0;
  if (r == 0.0 && out_exp < 0.0) {
    throw DomainError("p_laplacian_radial_power: r = 0 with negative output exponent");
  }
  return ca * std::pow(std::abs(ca), p - 2.0) * coeff * std::pow(r, out_exp);
}

double p_laplacian_radial_fd(const SpaceTimeFunction& u, double p, int n, double r, double t,
                             const FdOptions& opts) {
  const double h = opts.h;
  const double eps = opts.eps;
  const double um = u.eval(r - h, t);
  const double u0 = u.eval(r, t);
  const double up = u.eval(r + h, t);
  const double rp = r + 0.5 * h;
  const double rm = r - 0.5 * h;
  const double phi_p = std::pow(rp, n - 1) * flux((up - u0) / h, p, eps);
  const double phi_m = std::pow(rm, n - 1) * flux((u0 - um) / h, p, eps);
  return std::pow(r, 1 - n) * (phi_p - phi_m) / h;
}

double time_derivative_fd(const SpaceTimeFunction& u, double r, double t, double h) {
  return (u.eval(r, t + h) - u.eval(r, t - h)) / (2.0 * h);
}

double barenblatt(double r, double t, double p, int n, double C) {
  const auto s = barenblatt_shape(p, n);
  if (!(t > 0.0)) throw DomainError("barenblatt: requires t > 0");
  if (!(C > 0.0)) throw DomainError("barenblatt: requires C > 0");
  const double xi = r / std::pow(t, 1.0 / s.lam);
  const double core = C - s.k * std::pow(xi, p / (p - 1.0));
  if (core <= 0.0) return 0.0;
  return std::pow(t, -n / s.lam) * std::pow(core, s.expo);
}

double barenblatt_support_radius(double t, double p, int n, double C) {
  const auto s = barenblatt_shape(p, n);
  if (p < 2.0) return std::numeric_limits<double>::infinity();
  return std::pow(C / s.k, (p - 1.0) / p) * std::pow(t, 1.0 / s.lam);
}

SpaceTimeFunction barenblatt_function(double p, int n, double C) {
  const auto s = barenblatt_shape(p, n);
  if (!(C > 0.0)) throw DomainError("barenblatt: requires C > 0");
  SpaceTimeFunction u;
  u.label = "barenblatt";
  u.eval = [=](double r, double t) { return barenblatt(r, t, p, n, C); };
  // With xi = r t^{-1/lambda} and core = C - k xi^{p/(p-1)}:
  //   B_r = t^{-n/lambda} m core^{m-1} (-k) (p/(p-1)) xi^{1/(p-1)} t^{-1/lambda}
  //   B_t = -(n/lambda) B/t + t^{-n/lambda} m core^{m-1} k (p/(p-1)) xi^{p/(p-1)} / (lambda t)
  u.dr = [=](double r, double t) {
    const double xi = r / std::pow(t, 1.0 / s.lam);
    const double core = C - s.k * std::pow(xi, p / (p - 1.0));
    if (core <= 0.0) return 0.0;
    return std::pow(t, -n / s.lam) * s.expo * std::pow(core, s.expo - 1.0) * (-s.k) *
           (p / (p - 1.0)) * std::pow(xi, 1.0 / (p - 1.0)) * std::pow(t, -1.0 / s.lam);
  };
  u.dt = [=](double r, double t) {
    const double xi = r / std::pow(t, 1.0 / s.lam);
    const double core = C - s.k * std::pow(xi, p / (p - 1.0));
    if (core <= 0.0) return 0.0;
    const double scale = std::pow(t, -n / s.lam);
    const double b = scale * std::pow(core, s.expo);
    return -(n / s.lam) * b / t + scale * s.expo * std::pow(core, s.expo - 1.0) * s.k *
                                      (p / (p - 1.0)) * std::pow(xi, p / (p - 1.0)) / (s.lam * t);
  };
  u.inside = [](double r, double t) { return r >= 0.0 && t > 0.0; };
  return u;
}

double residual(const SpaceTimeFunction& u, double p, int n, double r, double t, ResidualMode mode,
                const FdOptions& fd) {
  if (u.inside && !u.inside(r, t)) {
    throw DomainError("residual: (r,t) outside the domain of " + u.label);
  }
  const double ut = u.dt ? u.dt(r, t) : time_derivative_fd(u, r, t);
  double lap = 0.0;
  if (mode == ResidualMode::prefer_closed_form && u.plap) {
    lap = u.plap(r, t);
  } else if (u.dr) {
    const double h = fd.h;
    const auto phi = [&](double rho) {
      return std::pow(rho, n - 1) * flux(u.dr(rho, t), p, fd.eps);
    };
    lap = std::pow(r, 1 - n) * (phi(r + h) - phi(r - h)) / (2.0 * h);
  } else {
    lap = p_laplacian_radial_fd(u, p, n, r, t, fd);
  }
  return ut - lap;
}

}  // namespace petrocheck
