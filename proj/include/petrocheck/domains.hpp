#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace petrocheck {

/// Monotone piecewise-cubic Hermite interpolant (Fritsch-Carlson slopes).
///
/// C^1, and monotone on every interval where the data are monotone. Outside
/// [x.front(), x.back()] the interpolant is extended by the end values with
/// zero slope.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double value(double x) const;
  double derivative(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

 private:
  std::size_t segment(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
};

enum class ProfileKind { power, petrovskii_loglog, tabulated };

std::string to_string(ProfileKind kind);
ProfileKind profile_kind_from_string(const std::string& name);

/// Width function zeta(t) > 0 of the cusp
///   Theta = {(x,t) : |x| < zeta(t), t0 < t < 0}.
///
/// Immutable after construction and safe to share between threads.
class DomainProfile {
 public:
  /// zeta(t) = K (-t)^q.
  static DomainProfile power(double K, double q, double t0 = -1.0);
  /// zeta(t) = K sqrt(-t) sqrt(log|log(-t)|); needs t0 > -1/e.
  static DomainProfile petrovskii_loglog(double K, double t0);
  /// Samples (t_i, zeta_i) with t strictly increasing and negative, zeta > 0.
  /// zeta and zeta' come from a monotone cubic through the samples; t0 is the
  /// first sample and queries past the last sample raise DomainError.
  static DomainProfile tabulated(std::vector<double> t, std::vector<double> zeta);
  /// Reads a CSV file with header "t,zeta".
  static DomainProfile from_csv(const std::string& path);

  ProfileKind kind() const { return kind_; }
  double K() const { return K_; }
  double q() const { return q_; }
  double t0() const { return t0_; }
  /// Latest admissible time (0 for closed-form kinds, last sample for tables).
  double t_end() const;

  double zeta(double t) const;
  double dzeta(double t) const;
  /// (r,t) in Theta  <=>  t0 < t < 0 and r < zeta(t).
  bool contains(double r, double t) const;

  /// Profile with zeta multiplied by a > 0.
  DomainProfile scaled(double a) const;

  const std::vector<double>& table_t() const { return table_t_; }
  const std::vector<double>& table_zeta() const { return table_z_; }

  std::string describe() const;

 private:
  DomainProfile() = default;
  void check_time(double t) const;

  ProfileKind kind_ = ProfileKind::power;
  double K_ = 1.0;
  double q_ = 0.0;
  double t0_ = -1.0;
  std::vector<double> table_t_;
  std::vector<double> table_z_;
  std::shared_ptr<const MonotoneCubic> table_;
};

/// Generic constructor dispatching on kind (tabulated kinds must use tabulated()).
DomainProfile make_profile(ProfileKind kind, double K, double q, double t0);

/// Geometric time samples t_k = t0 sigma^k, k = 0..count-1.
struct GaugeSampling {
  double sigma = 0.9;
  int count = 200;
};

/// The rescaled width delta(t) together with its monotonicity status.
///
/// `delta` is defined for every t in the cusp's time range; `ddelta` is empty
/// when no derivative is available. `t` and `values` hold the geometric
/// samples on which properties are checked.
struct Gauge {
  double beta = 0.0;
  std::function<double(double)> delta;
  std::function<double(double)> ddelta;
  std::vector<double> t;
  std::vector<double> values;
  /// (-t)^{-beta} delta(t) is nondecreasing on the samples (1e-12 slack).
  bool monotone_flag = false;

  bool has_derivative() const { return static_cast<bool>(ddelta); }
  /// h_k = (-t_k)^{-beta} delta(t_k).
  std::vector<double> weighted() const;
};

/// Sampled behaviour of (-t)^{-gamma} delta(t) as t -> 0-.
struct GaugeLimit {
  std::vector<double> t;
  std::vector<double> values;
  /// Values over the last quarter of the samples are nonincreasing.
  bool decreasing_tail = false;
  /// decreasing_tail and the last value is below 1e-2 of the maximum.
  bool vanishes = false;
};

/// delta(t) = (zeta(t) / (-t)^{1/lambda})^{p/(p-1)}, beta = n(p-2)/lambda.
Gauge gauge_of(const DomainProfile& profile, double p, int n, const GaugeSampling& sampling = {});

/// (-t)^{-gamma} delta(t) on the gauge samples, gamma = beta/(p-1).
GaugeLimit gamma_limit(const Gauge& gauge, double p);

/// Running maximum h~_k = max_{j <= k} h_j. Throws on empty input.
std::vector<double> running_sup(std::span<const double> h);

/// delta~ = (-t)^beta * running_sup((-t)^{-beta} delta) on the samples of `gauge`.
/// Between samples delta~ uses the running sup of the samples at or before t.
Gauge monotonized(const Gauge& gauge);

/// C^1 gauge delta^ with delta~ < delta^ < 2 delta~ at every sample and
/// (-t)^{-beta} delta^ nondecreasing.
///
/// Built in s = log(-t): G(s) = log(factor * h~) is interpolated by a
/// monotone cubic and delta^(t) = (-t)^beta exp(G(log(-t))). `factor` must lie
/// in (1, 2). Throws DomainError when (-t)^{-beta} delta~ is not nondecreasing.
Gauge monotone_smooth_envelope(std::span<const double> t, std::span<const double> delta_tilde,
                               double beta, double factor = 1.5);

/// gauge_of -> monotonized -> monotone_smooth_envelope: the smooth
/// monotone gauge used by the degenerate barrier family.
Gauge enveloped_gauge(const DomainProfile& profile, double p, int n,
                      const GaugeSampling& sampling = {}, double factor = 1.5);

/// Profile with zeta~ = a zeta and the amplitude factor a^{-p/(p-2)} for which
/// u(x,t) = factor * u~(a x, t) maps solutions on Theta~ to solutions on Theta.
std::pair<DomainProfile, double> scale_domain(const DomainProfile& profile, double a, double p);

}  // namespace petrocheck
