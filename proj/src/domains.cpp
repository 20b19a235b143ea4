#include "petrocheck/domains.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "petrocheck/params.hpp"

namespace petrocheck {

// ---------------------------------------------------------------------------
// MonotoneCubic

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw DomainError("MonotoneCubic: need at least two (x,y) pairs of equal length");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw DomainError("MonotoneCubic: x must be strictly increasing");
  }
  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x_[i + 1] - x_[i];
    d[i] = (y_[i + 1] - y_[i]) / h[i];
  }
  m_.assign(n, 0.0);
  m_.front() = d.front();
  m_.back() = d.back();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) continue;
    const double w1 = 2.0 * h[i] + h[i - 1];
    const double w2 = h[i] + 2.0 * h[i - 1];
    m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
  }
}

std::size_t MonotoneCubic::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - x_.begin());
  if (k == 0) return 0;
  return std::min(k - 1, x_.size() - 2);
}

double MonotoneCubic::value(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double s = (x - x_[k]) / h;
  const double s2 = s * s;
  const double s3 = s2 * s;
  return (2 * s3 - 3 * s2 + 1) * y_[k] + (s3 - 2 * s2 + s) * h * m_[k] +
         (-2 * s3 + 3 * s2) * y_[k + 1] + (s3 - s2) * h * m_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  if (x < x_.front() || x > x_.back()) return 0.0;
  const std::size_t k = segment(x);
  const double h = x_[k + 1] - x_[k];
  const double s = (x - x_[k]) / h;
  const double s2 = s * s;
  return ((6 * s2 - 6 * s) * y_[k] + (-6 * s2 + 6 * s) * y_[k + 1]) / h +
         (3 * s2 - 4 * s + 1) * m_[k] + (3 * s2 - 2 * s) * m_[k + 1];
}

// ---------------------------------------------------------------------------
// DomainProfile

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::power:
      return "power";
    case ProfileKind::petrovskii_loglog:
      return "petrovskii_loglog";
    case ProfileKind::tabulated:
      return "tabulated";
  }
  return "unknown";
}

ProfileKind profile_kind_from_string(const std::string& name) {
  if (name == "power") return ProfileKind::power;
  if (name == "petrovskii_loglog") return ProfileKind::petrovskii_loglog;
  if (name == "tabulated") return ProfileKind::tabulated;
  throw DomainError("unknown profile kind '" + name + "'");
}

DomainProfile DomainProfile::power(double K, double q, double t0) {
  if (!(K > 0.0)) throw DomainError("power profile: K must be > 0");
  if (!(q > 0.0)) throw DomainError("power profile: q must be > 0");
  if (!(t0 < 0.0)) throw DomainError("power profile: t0 must be < 0");
  DomainProfile prof;
  prof.kind_ = ProfileKind::power;
  prof.K_ = K;
  prof.q_ = q;
  prof.t0_ = t0;
  return prof;
}

DomainProfile DomainProfile::petrovskii_loglog(double K, double t0) {
  if (!(K > 0.0)) throw DomainError("petrovskii_loglog profile: K must be > 0");
  if (!(t0 < 0.0)) throw DomainError("petrovskii_loglog profile: t0 must be < 0");
  if (!(t0 > -std::exp(-1.0))) {
    throw DomainError("petrovskii_loglog profile: t0 must exceed -1/e so that log|log(-t)| is defined");
  }
  DomainProfile prof;
  prof.kind_ = ProfileKind::petrovskii_loglog;
  prof.K_ = K;
  prof.t0_ = t0;
  return prof;
}

DomainProfile DomainProfile::tabulated(std::vector<double> t, std::vector<double> zeta) {
  if (t.size() < 2 || t.size() != zeta.size()) {
    throw DomainError("tabulated profile: need at least two samples of (t, zeta)");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] < 0.0)) throw DomainError("tabulated profile: t must be negative");
    if (!(zeta[i] > 0.0)) throw DomainError("tabulated profile: zeta must be positive");
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw DomainError("tabulated profile: t must be strictly increasing");
    }
  }
  DomainProfile prof;
  prof.kind_ = ProfileKind::tabulated;
  prof.t0_ = t.front();
  prof.table_t_ = t;
  prof.table_z_ = zeta;
  prof.table_ = std::make_shared<const MonotoneCubic>(std::move(t), std::move(zeta));
  return prof;
}

DomainProfile DomainProfile::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open profile CSV '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DomainError("profile CSV '" + path + "' is empty");
  line.erase(std::remove_if(line.begin(), line.end(), ::isspace), line.end());
  if (line != "t,zeta") throw DomainError("profile CSV must start with the header 't,zeta'");
  std::vector<double> t, z;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw DomainError("malformed profile CSV row: '" + line + "'");
    }
    t.push_back(std::stod(a));
    z.push_back(std::stod(b));
  }
  return tabulated(std::move(t), std::move(z));
}

double DomainProfile::t_end() const {
  return kind_ == ProfileKind::tabulated ? table_t_.back() : 0.0;
}

void DomainProfile::check_time(double t) const {
  if (kind_ == ProfileKind::tabulated) {
    if (t < table_t_.front() || t > table_t_.back()) {
      throw DomainError("tabulated profile queried outside its sample range");
    }
  } else if (!(t < 0.0)) {
    throw DomainError("profile queried at t >= 0");
  }
}

double DomainProfile::zeta(double t) const {
  check_time(t);
  switch (kind_) {
    case ProfileKind::power:
      return K_ * std::pow(-t, q_);
    case ProfileKind::petrovskii_loglog:
      return K_ * std::sqrt(-t) * std::sqrt(std::log(std::abs(std::log(-t))));
    case ProfileKind::tabulated:
      return table_->value(t);
  }
  return 0.0;
}

double DomainProfile::dzeta(double t) const {
  check_time(t);
  switch (kind_) {
    case ProfileKind::power:
      return -q_ * K_ * std::pow(-t, q_ - 1.0);
    case ProfileKind::petrovskii_loglog: {
      // s = -t, L = log s < -1, l = log(-L); d zeta/ds = (K/2) s^{-1/2} (l^{1/2} + l^{-1/2}/L).
      const double s = -t;
      const double L = std::log(s);
      const double l = std::log(-L);
      return -0.5 * K_ / std::sqrt(s) * (std::sqrt(l) + 1.0 / (std::sqrt(l) * L));
    }
    case ProfileKind::tabulated:
      return table_->derivative(t);
  }
  return 0.0;
}

bool DomainProfile::contains(double r, double t) const {
  if (!(t > t0_ && t < 0.0)) return false;
  if (kind_ == ProfileKind::tabulated && t > table_t_.back()) return false;
  return r >= 0.0 && r < zeta(t);
}

DomainProfile DomainProfile::scaled(double a) const {
  if (!(a > 0.0)) throw DomainError("profile scaling requires a > 0");
  DomainProfile out = *this;
  if (kind_ == ProfileKind::tabulated) {
    std::vector<double> z = table_z_;
    for (double& v : z) v *= a;
    return tabulated(table_t_, std::move(z));
  }
  out.K_ = K_ * a;
  return out;
}

std::string DomainProfile::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << to_string(kind_) << "(";
  switch (kind_) {
    case ProfileKind::power:
      os << "K=" << K_ << ",q=" << q_ << ",t0=" << t0_;
      break;
    case ProfileKind::petrovskii_loglog:
      os << "K=" << K_ << ",t0=" << t0_;
      break;
    case ProfileKind::tabulated:
      os << "samples=" << table_t_.size() << ",t0=" << t0_;
      break;
  }
  os << ")";
  return os.str();
}

DomainProfile make_profile(ProfileKind kind, double K, double q, double t0) {
  switch (kind) {
    case ProfileKind::power:
      return DomainProfile::power(K, q, t0);
    case ProfileKind::petrovskii_loglog:
      return DomainProfile::petrovskii_loglog(K, t0);
    case ProfileKind::tabulated:
      break;
  }
  throw DomainError("make_profile: tabulated profiles are built from samples");
}

// ---------------------------------------------------------------------------
// Gauges

namespace {

bool weighted_nondecreasing(std::span<const double> h) {
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (h[i] < h[i - 1] - 1e-12 * std::max(1.0, std::abs(h[i - 1]))) return false;
  }
  return true;
}

}  // namespace

std::vector<double> Gauge::weighted() const {
  std::vector<double> h(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) h[i] = std::pow(-t[i], -beta) * values[i];
  return h;
}

Gauge gauge_of(const DomainProfile& profile, double p, int n, const GaugeSampling& sampling) {
  const double lam = lambda_of(p, n);
  if (!(lam > 0.0)) throw DomainError("gauge_of: requires lambda = n(p-2)+p > 0");
  if (!(sampling.sigma > 0.0 && sampling.sigma < 1.0) || sampling.count < 2) {
    throw DomainError("gauge_of: sampling needs 0 < sigma < 1 and count >= 2");
  }
  Gauge g;
  g.beta = n * (p - 2.0) / lam;
  const double expo = p / (p - 1.0);
  g.delta = [profile, lam, expo](double t) {
    return std::pow(profile.zeta(t) / std::pow(-t, 1.0 / lam), expo);
  };
  // delta' = (p/(p-1)) delta (zeta'/zeta + 1/(lambda (-t))).
  g.ddelta = [profile, lam, expo, delta = g.delta](double t) {
    return expo * delta(t) * (profile.dzeta(t) / profile.zeta(t) + 1.0 / (lam * (-t)));
  };
  double t = profile.t0();
  for (int k = 0; k < sampling.count && t <= profile.t_end(); ++k, t *= sampling.sigma) {
    if (profile.kind() != ProfileKind::tabulated && !(t < 0.0)) break;
    g.t.push_back(t);
    g.values.push_back(g.delta(t));
  }
  g.monotone_flag = weighted_nondecreasing(g.weighted());
  return g;
}

GaugeLimit gamma_limit(const Gauge& gauge, double p) {
  const double gamma = gauge.beta / (p - 1.0);
  GaugeLimit out;
  out.t = gauge.t;
  out.values.resize(gauge.t.size());
  double vmax = 0.0;
  for (std::size_t i = 0; i < gauge.t.size(); ++i) {
    out.values[i] = std::pow(-gauge.t[i], -gamma) * gauge.values[i];
    vmax = std::max(vmax, out.values[i]);
  }
  const std::size_t start = out.values.size() - out.values.size() / 4;
  out.decreasing_tail = true;
  for (std::size_t i = std::max<std::size_t>(start, 1); i < out.values.size(); ++i) {
    if (out.values[i] > out.values[i - 1]) out.decreasing_tail = false;
  }
  out.vanishes = out.decreasing_tail && !out.values.empty() && out.values.back() <= 1e-2 * vmax;
  return out;
}

std::vector<double> running_sup(std::span<const double> h) {
  if (h.empty()) throw DomainError("running_sup: empty input");
  std::vector<double> out(h.begin(), h.end());
  for (std::size_t i = 1; i < out.size(); ++i) out[i] = std::max(out[i], out[i - 1]);
  return out;
}

Gauge monotonized(const Gauge& gauge) {
  const auto sup = running_sup(gauge.weighted());
  Gauge out;
  out.beta = gauge.beta;
  out.t = gauge.t;
  out.values.resize(sup.size());
  for (std::size_t i = 0; i < sup.size(); ++i) out.values[i] = std::pow(-out.t[i], out.beta) * sup[i];
  out.delta = [ts = out.t, sup, beta = out.beta](double t) {
    auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t k = it == ts.begin() ? 0 : static_cast<std::size_t>(it - ts.begin()) - 1;
    return std::pow(-t, beta) * sup[k];
  };
  out.monotone_flag = true;
  return out;
}

Gauge monotone_smooth_envelope(std::span<const double> t, std::span<const double> delta_tilde,
                               double beta, double factor) {
  if (t.size() != delta_tilde.size() || t.size() < 2) {
    throw DomainError("monotone_smooth_envelope: need at least two matching samples");
  }
  if (!(factor > 1.0 && factor < 2.0)) {
    throw DomainError("monotone_smooth_envelope: factor must lie strictly between 1 and 2");
  }
  std::vector<double> h(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] < 0.0) || !(delta_tilde[i] > 0.0)) {
      throw DomainError("monotone_smooth_envelope: samples need t < 0 and delta > 0");
    }
    if (i > 0 && !(t[i] > t[i - 1])) {
      throw DomainError("monotone_smooth_envelope: t must be strictly increasing");
    }
    h[i] = std::pow(-t[i], -beta) * delta_tilde[i];
  }
  if (!weighted_nondecreasing(h)) {
    throw DomainError("monotone_smooth_envelope: (-t)^{-beta} delta~ is not nondecreasing");
  }
  // s = log(-t) decreases with t; the spline needs increasing abscissae.
  const std::size_t m = t.size();
  std::vector<double> s(m), G(m);
  for (std::size_t i = 0; i < m; ++i) {
    s[m - 1 - i] = std::log(-t[i]);
    G[m - 1 - i] = std::log(factor * h[i]);
  }
  // Enforce nonincreasing G in s exactly; the 1e-12 slack above may leave ties.
  for (std::size_t i = 1; i < m; ++i) G[i] = std::min(G[i], G[i - 1]);
  auto spline = std::make_shared<const MonotoneCubic>(std::move(s), std::move(G));

  Gauge out;
  out.beta = beta;
  out.delta = [spline, beta](double tt) {
    return std::pow(-tt, beta) * std::exp(spline->value(std::log(-tt)));
  };
  // d/dt [(-t)^beta e^{G(log(-t))}] = delta^ (beta + G'(s)) / t.
  out.ddelta = [spline, beta, delta = out.delta](double tt) {
    return delta(tt) * (beta + spline->derivative(std::log(-tt))) / tt;
  };
  out.t.assign(t.begin(), t.end());
  out.values.resize(m);
  constexpr double margin = 1e-9;
  for (std::size_t i = 0; i < m; ++i) {
    out.values[i] = out.delta(t[i]);
    if (!(out.values[i] > delta_tilde[i] * (1.0 + margin) &&
          out.values[i] < 2.0 * delta_tilde[i] * (1.0 - margin))) {
      throw DomainError("monotone_smooth_envelope: sandwich violated at a sample");
    }
  }
  out.monotone_flag = weighted_nondecreasing(out.weighted());
  return out;
}

Gauge enveloped_gauge(const DomainProfile& profile, double p, int n, const GaugeSampling& sampling,
                      double factor) {
  const Gauge tilde = monotonized(gauge_of(profile, p, n, sampling));
  return monotone_smooth_envelope(tilde.t, tilde.values, tilde.beta, factor);
}

std::pair<DomainProfile, double> scale_domain(const DomainProfile& profile, double a, double p) {
  if (p == 2.0) throw DomainError("scale_domain: no scaling invariance for p = 2");
  if (!(a > 0.0)) throw DomainError("scale_domain: requires a > 0");
  return {profile.scaled(a), std::pow(a, -p / (p - 2.0))};
}

}  // namespace petrocheck
