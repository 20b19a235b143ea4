#include "petrocheck/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "petrocheck/params.hpp"

namespace petrocheck {

namespace {

struct RegularizedFlux {
  double p;
  double eps;

  // (s^2 + eps^2)^{(p-2)/2}
  double coefficient(double s) const { return std::pow(s * s + eps * eps, 0.5 * (p - 2.0)); }
  double value(double s) const { return coefficient(s) * s; }
  // (s^2 + eps^2)^{(p-4)/2} ((p-1) s^2 + eps^2)
  double slope(double s) const {
    const double q = s * s + eps * eps;
    return std::pow(q, 0.5 * (p - 4.0)) * ((p - 1.0) * s * s + eps * eps);
  }
};

struct Mesh {
  int N = 0;
  double h = 0.0;
  std::vector<double> y;
  std::vector<double> vol;    // control volume of node i (radial weight y^{n-1})
  std::vector<double> wface;  // (y_i + h/2)^{n-1}, face between i and i+1
};

Mesh make_mesh(int N, int n) {
  Mesh m;
  m.N = N;
  m.h = 1.0 / N;
  m.y.resize(N + 1);
  m.vol.resize(N + 1);
  m.wface.resize(N);
  for (int i = 0; i <= N; ++i) m.y[i] = static_cast<double>(i) / N;
  const double hh = 0.5 * m.h;
  m.vol[0] = std::pow(hh, n) / n;
  for (int i = 1; i <= N; ++i) {
    m.vol[i] = (std::pow(m.y[i] + hh, n) - std::pow(m.y[i] - hh, n)) / n;
  }
  for (int i = 0; i < N; ++i) m.wface[i] = std::pow(m.y[i] + hh, n - 1);
  return m;
}

// Solves the tridiagonal system lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
void thomas(std::vector<double>& lower, std::vector<double>& diag, std::vector<double>& upper,
            std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

// One implicit Euler step: unknowns U[0..N-1], U[N] is Dirichlet.
class StepSolver {
 public:
  StepSolver(const Mesh& mesh, const RegularizedFlux& flux, const SolverConfig& config)
      : mesh_(mesh), flux_(flux), config_(config) {
    const std::size_t n = static_cast<std::size_t>(mesh.N);
    R_.resize(n);
    trial_.resize(mesh.N + 1);
    lower_.resize(n);
    diag_.resize(n);
    upper_.resize(n);
    adv_.resize(n);
  }

  struct Stats {
    int newton = 0;
    bool picard = false;
  };

  // Returns false when neither Newton nor Picard reached the tolerance.
  bool solve(std::span<const double> old, std::vector<double>& U, double dt, double diffusion,
             double zeta_ratio, Stats& stats) {
    dt_ = dt;
    D_ = diffusion;
    old_ = old;
    for (int i = 0; i < mesh_.N; ++i) adv_[i] = mesh_.y[i] * zeta_ratio;

    const std::vector<double> start = U;
    if (newton(U, stats)) return true;
    U = start;
    stats.picard = true;
    return picard(U, stats);
  }

 private:
  double residual(std::span<const double> U, std::vector<double>& R) const {
    const double h = mesh_.h;
    double norm = 0.0;
    double flux_left = 0.0;
    for (int i = 0; i < mesh_.N; ++i) {
      const double flux_right = mesh_.wface[i] * flux_.value((U[i + 1] - U[i]) / h);
      const double div = (flux_right - flux_left) / mesh_.vol[i];
      double transport = 0.0;
      if (adv_[i] < 0.0) {
        transport = adv_[i] * (U[i] - U[i - 1]) / h;
      } else if (adv_[i] > 0.0) {
        transport = adv_[i] * (U[i + 1] - U[i]) / h;
      }
      R[i] = U[i] - old_[i] - dt_ * transport - dt_ * D_ * div;
      norm = std::max(norm, std::abs(R[i]));
      flux_left = flux_right;
    }
    return norm;
  }

  // Tridiagonal matrix; slope(s) gives dF/ds (Newton) or F(s)/s (Picard).
  template <typename Slope>
  void assemble(std::span<const double> U, Slope slope) {
    const double h = mesh_.h;
    double k_left = 0.0;
    for (int i = 0; i < mesh_.N; ++i) {
      const double k_right = mesh_.wface[i] * slope((U[i + 1] - U[i]) / h) / h;
      const double c = dt_ * D_ / mesh_.vol[i];
      lower_[i] = -c * k_left;
      upper_[i] = -c * k_right;
      diag_[i] = 1.0 + c * (k_left + k_right);
      if (adv_[i] < 0.0) {
        diag_[i] -= dt_ * adv_[i] / h;
        lower_[i] += dt_ * adv_[i] / h;
      } else if (adv_[i] > 0.0) {
        diag_[i] += dt_ * adv_[i] / h;
        upper_[i] -= dt_ * adv_[i] / h;
      }
      k_left = k_right;
    }
  }

  bool newton(std::vector<double>& U, Stats& stats) {
    double rn = residual(U, R_);
    for (int it = 0; it < config_.newton_max; ++it) {
      if (!std::isfinite(rn)) return false;
      if (rn <= config_.tol) {
        polish(U, rn, [this](double s) { return flux_.slope(s); });
        return true;
      }
      assemble(U, [this](double s) { return flux_.slope(s); });
      std::vector<double>& delta = R_;
      thomas(lower_, diag_, upper_, delta);
      double lambda = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 12; ++ls, lambda *= 0.5) {
        for (int i = 0; i < mesh_.N; ++i) trial_[i] = U[i] - lambda * delta[i];
        trial_[mesh_.N] = U[mesh_.N];
        std::vector<double> Rt(R_.size());
        const double rt = residual(trial_, Rt);
        if (std::isfinite(rt) && rt < (1.0 - 1e-4 * lambda) * rn) {
          U.swap(trial_);
          R_.swap(Rt);
          rn = rt;
          accepted = true;
          break;
        }
      }
      ++stats.newton;
      if (!accepted) return false;
    }
    return rn <= config_.tol;
  }

  bool picard(std::vector<double>& U, Stats& stats) {
    const auto secant = [this](double s) { return flux_.coefficient(s); };
    double rn = residual(U, R_);
    for (int it = 0; it < config_.picard_max; ++it) {
      if (!std::isfinite(rn)) return false;
      if (rn <= config_.tol) return true;
      assemble(U, secant);
      thomas(lower_, diag_, upper_, R_);
      for (int i = 0; i < mesh_.N; ++i) U[i] -= R_[i];
      rn = residual(U, R_);
      ++stats.newton;
    }
    return rn <= config_.tol;
  }

  // One extra correction once converged; kept only if the residual does not grow.
  template <typename Slope>
  void polish(std::vector<double>& U, double rn, Slope slope) {
    assemble(U, slope);
    residual(U, R_);
    thomas(lower_, diag_, upper_, R_);
    for (int i = 0; i < mesh_.N; ++i) trial_[i] = U[i] - R_[i];
    trial_[mesh_.N] = U[mesh_.N];
    std::vector<double> Rt(R_.size());
    const double rt = residual(trial_, Rt);
    if (std::isfinite(rt) && rt <= rn) U.swap(trial_);
  }

  const Mesh& mesh_;
  RegularizedFlux flux_;
  const SolverConfig& config_;
  double dt_ = 0.0;
  double D_ = 0.0;
  std::span<const double> old_;
  std::vector<double> R_, trial_, lower_, diag_, upper_, adv_;
};

void validate(const DomainProfile& profile, double p, int n, const SolverConfig& config) {
  if (!(p > 1.0)) throw DomainError("solver: requires p > 1");
  if (n < 1) throw DomainError("solver: requires n >= 1");
  if (config.n_y < 2) throw DomainError("solver: n_y must be >= 2");
  if (!(config.eps_reg > 0.0)) throw DomainError("solver: eps_reg must be > 0");
  if (!(config.c_step > 0.0) || !(config.geo_step > 0.0) || !(config.geo_step < 1.0)) {
    throw DomainError("solver: need c_step > 0 and 0 < geo_step < 1");
  }
  if (!(config.tol > 0.0)) throw DomainError("solver: tol must be > 0");
  const double t_end = -resolved_eps_min(config, profile.t0());
  if (!(t_end > profile.t0())) throw DomainError("solver: eps_min must be smaller than |t0|");
  if (t_end > profile.t_end()) {
    throw DomainError("solver: profile does not extend to t = -eps_min");
  }
}

}  // namespace

double resolved_eps_min(const SolverConfig& config, double t0) {
  return config.eps_min > 0.0 ? config.eps_min : 1e-4 * std::abs(t0);
}

bool GridField::max_principle_holds(double tol) const {
  return value_min >= boundary_min - tol && value_max <= boundary_max + tol;
}

TransformCoefficients transform_pde(const DomainProfile& profile, double p, int n) {
  if (!(p > 1.0) || n < 1) throw DomainError("transform_pde: requires p > 1 and n >= 1");
  TransformCoefficients c;
  c.advection = [profile](double y, double t) { return y * profile.dzeta(t) / profile.zeta(t); };
  c.diffusion_scale = [profile, p](double t) { return std::pow(profile.zeta(t), -p); };
  return c;
}

std::function<double(double, double)> to_fixed(const DomainProfile& profile,
                                              std::function<double(double, double)> u) {
  return [profile, u = std::move(u)](double y, double t) { return u(y * profile.zeta(t), t); };
}

std::function<double(double, double)> to_physical(const DomainProfile& profile,
                                                 std::function<double(double, double)> U) {
  return [profile, U = std::move(U)](double r, double t) { return U(r / profile.zeta(t), t); };
}

double transformed_residual(const std::function<double(double, double)>& U,
                            const DomainProfile& profile, double p, int n, double y, double t,
                            double h) {
  const auto coeff = transform_pde(profile, p, n);
  const double ht = h * std::abs(t);
  const double Ut = (U(y, t + ht) - U(y, t - ht)) / (2.0 * ht);
  const double um = U(y - h, t);
  const double u0 = U(y, t);
  const double up = U(y + h, t);
  const double Uy = (up - um) / (2.0 * h);
  const auto F = [p](double s) { return s == 0.0 ? 0.0 : std::pow(std::abs(s), p - 2.0) * s; };
  const double phi_p = std::pow(y + 0.5 * h, n - 1) * F((up - u0) / h);
  const double phi_m = std::pow(y - 0.5 * h, n - 1) * F((u0 - um) / h);
  const double Lp = std::pow(y, 1 - n) * (phi_p - phi_m) / h;
  return Ut - coeff.advection(y, t) * Uy - coeff.diffusion_scale(t) * Lp;
}

double next_time(const DomainProfile& profile, double p, double t, double t_end,
                 const SolverConfig& config) {
  const double cap = std::min(config.c_step * std::pow(profile.zeta(t), p), config.geo_step * (-t));
  const double rem = t_end - t;
  if (cap >= rem) return t_end;
  if (rem - cap < 0.25 * cap) return t + 0.5 * rem;
  return t + cap;
}

GridField solve_dirichlet(const DomainProfile& profile, double p, int n, const BoundaryData& f,
                          const SolverConfig& config) {
  validate(profile, p, n, config);
  const double t0 = profile.t0();
  const double z0 = profile.zeta(t0);
  std::vector<double> initial(config.n_y + 1);
  for (int i = 0; i <= config.n_y; ++i) {
    initial[i] = f(static_cast<double>(i) / config.n_y * z0, t0);
  }
  return solve_dirichlet_from(profile, p, n, f, t0, initial, config);
}

GridField solve_dirichlet_from(const DomainProfile& profile, double p, int n, const BoundaryData& f,
                               double t_start, std::span<const double> initial,
                               const SolverConfig& config) {
  validate(profile, p, n, config);
  const int N = config.n_y;
  if (initial.size() != static_cast<std::size_t>(N + 1)) {
    throw DomainError("solve_dirichlet_from: initial data must have n_y + 1 values");
  }
  const double t_end = -resolved_eps_min(config, profile.t0());
  if (!(t_start >= profile.t0() && t_start < t_end)) {
    throw DomainError("solve_dirichlet_from: t_start must lie in [t0, -eps_min)");
  }

  const Mesh mesh = make_mesh(N, n);
  const RegularizedFlux flux{p, config.eps_reg};
  StepSolver stepper(mesh, flux, config);

  GridField field;
  field.y = mesh.y;
  field.p = p;
  field.n = n;
  field.profile = profile;

  std::vector<double> U(initial.begin(), initial.end());
  std::vector<double> old = U;
  field.boundary_min = *std::min_element(U.begin(), U.end());
  field.boundary_max = *std::max_element(U.begin(), U.end());
  field.value_min = field.boundary_min;
  field.value_max = field.boundary_max;

  const auto store = [&](double t, bool force) {
    field.t.push_back(t);
    field.axis_trace.emplace_back(t, U[0]);
    if (config.store_all || force) {
      field.stored_t.push_back(t);
      field.values.insert(field.values.end(), U.begin(), U.end());
    }
  };
  store(t_start, true);

  double t = t_start;
  while (t < t_end) {
    double t1 = next_time(profile, p, t, t_end, config);
    int halvings = 0;
    for (;;) {
      const double dt = t1 - t;
      const double z = profile.zeta(t1);
      old = U;
      U[N] = f(z, t1);
      StepSolver::Stats stats;
      const bool ok =
          stepper.solve(old, U, dt, std::pow(z, -p), profile.dzeta(t1) / z, stats);
      field.newton_iterations += stats.newton;
      if (stats.picard) ++field.picard_fallbacks;
      if (ok) break;
      U = old;
      if (++halvings > config.max_halvings) {
        std::ostringstream os;
        os.precision(17);
        os << "nonlinear solve failed at t = " << t << " -> " << t1 << " (dt = " << dt
           << ", zeta = " << z << ", p = " << p << ", n_y = " << N << ") after "
           << config.max_halvings << " step halvings";
        throw SolverError(os.str());
      }
      ++field.halvings;
      t1 = t + 0.5 * (t1 - t);
    }
    t = t1;
    field.boundary_min = std::min(field.boundary_min, U[N]);
    field.boundary_max = std::max(field.boundary_max, U[N]);
    for (double v : U) {
      if (!std::isfinite(v)) throw SolverError("solver produced a non-finite value");
      field.value_min = std::min(field.value_min, v);
      field.value_max = std::max(field.value_max, v);
    }
    store(t, t >= t_end);
  }
  return field;
}

}  // namespace petrocheck
