#include "petrocheck/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "petrocheck/params.hpp"

namespace petrocheck {

namespace {

CertificateReport make_report(const std::string& subject, const std::string& condition,
                              const GridMeta& grid, double worst, double r, double t, Sense sense,
                              double tol) {
  CertificateReport rep;
  rep.subject = subject;
  rep.condition = condition;
  rep.grid = grid;
  rep.worst_violation = worst;
  rep.worst_r = r;
  rep.worst_t = t;
  rep.sense = sense;
  rep.tolerance = tol;
  rep.pass = passes(worst, sense, tol);
  return rep;
}

// Worse of two sampled values under a sense; NaN is always worse.
bool worse(double candidate, double current, Sense sense) {
  if (std::isnan(candidate)) return !std::isnan(current);
  if (std::isnan(current)) return false;
  return sense == Sense::nonnegative ? candidate < current : candidate > current;
}

GridMeta field_meta(const GridField& field) {
  GridMeta g;
  g.n_t = static_cast<int>(field.stored_t.size());
  g.n_y = static_cast<int>(field.y.size());
  g.t_first = field.stored_t.front();
  g.t_last = field.stored_t.back();
  g.spacing = "solver nodes: uniform y in [0,1], adaptive implicit time levels";
  return g;
}

// Index-ordered extremum over a sampled buffer.
Extremum extremum(std::span<const double> values, Sense sense) {
  return sense == Sense::nonnegative ? fold_min(values) : fold_max(values);
}

}  // namespace

std::string to_string(Sense sense) {
  return sense == Sense::nonnegative ? ">=0" : "<=0";
}

bool passes(double worst, Sense sense, double tol) {
  if (std::isnan(worst)) return false;
  return sense == Sense::nonnegative ? worst >= -tol : worst <= tol;
}

SampleGrid certificate_grid(const DomainProfile& profile, int n_t, int n_y, double t_frac) {
  return interior_grid(profile.t0(), n_t, n_y, t_frac);
}

GridMeta describe_grid(const SampleGrid& grid) {
  GridMeta g;
  g.n_t = static_cast<int>(grid.t.size());
  g.n_y = static_cast<int>(grid.y.size());
  if (!grid.t.empty()) {
    g.t_first = grid.t.front();
    g.t_last = grid.t.back();
  }
  g.spacing = "geometric t, uniform interior y = r/zeta(t)";
  return g;
}

CertificateReport check_sign(const SpaceTimeFunction& u, const DomainProfile& profile, double p,
                             int n, const SampleGrid& grid, Sense sense, double tol, Exec exec,
                             const std::string& subject) {
  if (grid.size() == 0) throw DomainError("check_sign: empty grid");
  std::vector<double> values(grid.size());
  evaluate_on_grid(
      grid, profile, [&](double r, double t) { return residual(u, p, n, r, t); }, values, exec);
  const Extremum e = extremum(values, sense);
  const std::size_t i = e.index / grid.y.size();
  const std::size_t j = e.index % grid.y.size();
  const double t = grid.t[i];
  return make_report(subject.empty() ? u.label : subject, "residual " + to_string(sense),
                     describe_grid(grid), e.value, grid.y[j] * profile.zeta(t), t, sense, tol);
}

SpaceTimeFunction negate(const SpaceTimeFunction& u) {
  const auto flip = [](const SpaceTimeFunction::Field& g) -> SpaceTimeFunction::Field {
    if (!g) return {};
    return [g](double r, double t) { return -g(r, t); };
  };
  SpaceTimeFunction out;
  out.eval = flip(u.eval);
  out.dt = flip(u.dt);
  out.dr = flip(u.dr);
  // Delta_p is odd: Delta_p(-u) = -Delta_p u.
  out.plap = flip(u.plap);
  out.inside = u.inside;
  out.label = "-(" + u.label + ")";
  return out;
}

bool FamilyReport::pass() const {
  return !conditions.empty() &&
         std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
}

FamilyReport check_barrier_family(const std::vector<FamilyMember>& family,
                                  const DomainProfile& profile, double p, int n,
                                  const FamilySampleConfig& config) {
  if (family.empty()) throw DomainError("check_barrier_family: empty family");
  if (config.grid.size() == 0) throw DomainError("check_barrier_family: empty grid");
  if (config.rays < 1 || config.boundary_samples < 2 || config.k_max < 1) {
    throw DomainError("check_barrier_family: rays, boundary_samples and k_max must be positive");
  }
  const SampleGrid& grid = config.grid;
  const GridMeta meta = describe_grid(grid);
  const auto member_name = [&](std::size_t j) {
    std::ostringstream os;
    os.precision(17);
    os << "family[" << j << "] C=" << family[j].index;
    return os.str();
  };
  const auto locate = [&](std::size_t index) {
    const double t = grid.t[index / grid.y.size()];
    return std::pair{grid.y[index % grid.y.size()] * profile.zeta(t), t};
  };

  FamilyReport out;

  // (i) positivity and the supersolution sign, worst over the ladder.
  {
    std::vector<double> values(grid.size());
    CertificateReport pos, sup;
    for (std::size_t j = 0; j < family.size(); ++j) {
      const auto& w = family[j].w;
      evaluate_on_grid(grid, profile, w.eval, values, config.exec);
      const Extremum e = fold_min(values);
      if (j == 0 || worse(e.value, pos.worst_violation, Sense::nonnegative)) {
        const auto [r, t] = locate(e.index);
        pos = make_report(member_name(j), "(i) positivity", meta, e.value, r, t,
                          Sense::nonnegative, 0.0);
      }
      evaluate_on_grid(
          grid, profile, [&](double r, double t) { return residual(w, p, n, r, t); }, values,
          config.exec);
      const Extremum s = fold_min(values);
      if (j == 0 || worse(s.value, sup.worst_violation, Sense::nonnegative)) {
        const auto [r, t] = locate(s.index);
        sup = make_report(member_name(j), "(i) supersolution", meta, s.value, r, t,
                          Sense::nonnegative, config.residual_tol);
      }
    }
    out.conditions.push_back(pos);
    out.conditions.push_back(sup);
  }

  // (ii) decay along rays y_j = j/rays, t_m = t0 ratio^m.
  {
    std::vector<double> times;
    for (double t = profile.t0(); t <= profile.t0() * config.decay_t_frac * (1.0 - 1e-12);
         t *= config.decay_ratio) {
      times.push_back(t);
    }
    GridMeta dm;
    dm.n_t = static_cast<int>(times.size());
    dm.n_y = config.rays;
    dm.t_first = times.front();
    dm.t_last = times.back();
    dm.spacing = "rays y = j/rays, geometric t";
    CertificateReport dec;
    for (std::size_t j = 0; j < family.size(); ++j) {
      std::vector<double> env(times.size());
      std::vector<double> arg_r(times.size());
      for (std::size_t m = 0; m < times.size(); ++m) {
        env[m] = -std::numeric_limits<double>::infinity();
        const double z = profile.zeta(times[m]);
        for (int k = 0; k < config.rays; ++k) {
          const double r = static_cast<double>(k) / config.rays * z;
          const double v = family[j].w(r, times[m]);
          if (!(v <= env[m])) {
            env[m] = v;
            arg_r[m] = r;
          }
        }
      }
      const double peak = *std::max_element(env.begin(), env.end());
      double worst = env.back() - config.decay_fraction * peak;
      for (std::size_t m = std::max<std::size_t>(1, times.size() / 2); m < times.size(); ++m) {
        worst = std::max(worst, env[m] - env[m - 1]);
      }
      if (j == 0 || worse(worst, dec.worst_violation, Sense::nonpositive)) {
        dec = make_report(member_name(j), "(ii) decay", dm, worst, arg_r.back(), times.back(),
                          Sense::nonpositive, 0.0);
        std::ostringstream os;
        os.precision(6);
        os << "envelope max over rays: first " << env.front() << ", last " << env.back();
        dec.note = os.str();
      }
    }
    out.conditions.push_back(dec);
  }

  // (iii) growth away from the origin on the parabolic boundary.
  {
    const int B = config.boundary_samples;
    std::vector<std::pair<double, double>> pts;
    pts.reserve(2 * B);
    const double t0 = profile.t0();
    for (int i = 0; i < B; ++i) pts.emplace_back(profile.zeta(t0) * i / (B - 1), t0);
    for (int i = 0; i < B; ++i) {
      const double t = t0 * std::pow(config.lateral_t_frac, static_cast<double>(i) / (B - 1));
      pts.emplace_back(profile.zeta(t), t);
    }
    const int K = config.k_max;
    // inf_w[j][k-1] and its location.
    std::vector<std::vector<double>> inf_w(family.size(),
                                           std::vector<double>(K, std::numeric_limits<double>::infinity()));
    std::vector<std::vector<std::size_t>> inf_at(family.size(), std::vector<std::size_t>(K, 0));
    std::vector<std::vector<double>> values(family.size(), std::vector<double>(pts.size()));
    for_each_index(
        family.size(),
        [&](std::size_t j) {
          for (std::size_t i = 0; i < pts.size(); ++i) {
            values[j][i] = family[j].w(pts[i].first, pts[i].second);
          }
        },
        config.exec);
    for (std::size_t j = 0; j < family.size(); ++j) {
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const double dist = std::hypot(pts[i].first, pts[i].second);
        for (int k = 1; k <= K; ++k) {
          if (dist >= 1.0 / k && worse(values[j][i], inf_w[j][k - 1], Sense::nonnegative)) {
            inf_w[j][k - 1] = values[j][i];
            inf_at[j][k - 1] = i;
          }
        }
      }
    }
    out.j_of_k.assign(K, std::nullopt);
    GridMeta gm;
    gm.n_t = B;
    gm.n_y = B;
    gm.t_first = t0;
    gm.t_last = t0 * config.lateral_t_frac;
    gm.spacing = "bottom slice uniform in r, lateral surface geometric in t";
    CertificateReport gro;
    bool have = false;
    std::vector<int> unfilled;
    for (int k = 1; k <= K; ++k) {
      for (std::size_t j = 0; j < family.size(); ++j) {
        if (inf_w[j][k - 1] >= k) {
          out.j_of_k[k - 1] = static_cast<int>(j);
          break;
        }
      }
      // Margin of the selected member, or of the best member when none qualifies.
      std::size_t jj = 0;
      if (out.j_of_k[k - 1]) {
        jj = static_cast<std::size_t>(*out.j_of_k[k - 1]);
      } else {
        unfilled.push_back(k);
        for (std::size_t j = 1; j < family.size(); ++j) {
          if (inf_w[j][k - 1] > inf_w[jj][k - 1]) jj = j;
        }
      }
      const double margin = inf_w[jj][k - 1] - k;
      if (!have || worse(margin, gro.worst_violation, Sense::nonnegative)) {
        const auto& pt = pts[inf_at[jj][k - 1]];
        gro = make_report(member_name(jj), "(iii) growth", gm, margin, pt.first, pt.second,
                          Sense::nonnegative, 0.0);
        have = true;
      }
    }
    std::ostringstream os;
    os << "j(k) for k=1.." << K << ":";
    for (const auto& j : out.j_of_k) os << ' ' << (j ? std::to_string(*j) : std::string("-"));
    if (!unfilled.empty()) {
      gro.inconclusive = true;
      gro.pass = false;
      os << "; ladder too short for k =";
      for (int k : unfilled) os << ' ' << k;
    }
    gro.note = os.str();
    out.conditions.push_back(gro);
  }
  return out;
}

std::vector<CertificateReport> check_family_bounds(double p, int n, const Gauge& gauge,
                                                   const DomainProfile& profile,
                                                   const SampleGrid& grid, double C, Exec exec) {
  if (grid.size() == 0) throw DomainError("check_family_bounds: empty grid");
  const double lam = lambda_of(p, n);
  const double e = 1.0 / (p - 2.0);
  const double a = (p - 1.0) / (p - 2.0);
  const GridMeta meta = describe_grid(grid);
  std::ostringstream name;
  name.precision(17);
  name << "family C=" << C;

  std::vector<double> lo(grid.size()), hi(grid.size()), lb(grid.size());
  for_each_index(
      grid.t.size(),
      [&](std::size_t i) {
        const double t = grid.t[i];
        const double z = profile.zeta(t);
        const double bound = std::pow(C, e) * std::pow(gauge.delta(t), a) *
                             std::pow(-t, -n / lam) / p;
        for (std::size_t j = 0; j < grid.y.size(); ++j) {
          const auto k = family_pieces(p, n, gauge, C, grid.y[j] * z, t);
          const std::size_t idx = i * grid.y.size() + j;
          lo[idx] = k.Q / C - 1.0;
          hi[idx] = k.Q / (2.0 * C) - 1.0;
          lb[idx] = (k.w - bound) / bound;
        }
      },
      exec);
  std::vector<CertificateReport> out;
  const auto add = [&](const std::vector<double>& v, const char* cond, Sense sense, double tol) {
    const Extremum x = extremum(v, sense);
    const double t = grid.t[x.index / grid.y.size()];
    const double r = grid.y[x.index % grid.y.size()] * profile.zeta(t);
    out.push_back(make_report(name.str(), cond, meta, x.value, r, t, sense, tol));
  };
  add(lo, "sandwich Q/C - 1", Sense::nonnegative, 0.0);
  add(hi, "sandwich Q/(2C) - 1", Sense::nonpositive, 0.0);
  add(lb, "lower bound (w - bound)/bound", Sense::nonnegative, 1e-12);
  return out;
}

bool FamilyCertificate::pass() const {
  return family.pass() &&
         std::all_of(bounds.begin(), bounds.end(), [](const auto& c) { return c.pass; });
}

FamilyCertificate certify_family(double p, int n, const DomainProfile& profile,
                                 const SampleGrid& grid, int k_max, int ladder_size, Exec exec) {
  if (ladder_size < 1) throw DomainError("certify_family: ladder_size must be positive");
  FamilyCertificate out;
  out.gauge = enveloped_gauge(profile, p, n);
  out.threshold = find_C0(p, n, out.gauge, profile, grid);
  std::vector<FamilyMember> members;
  for (int j = 0; j < ladder_size; ++j) {
    const double C = std::ldexp(out.threshold.C0, j);
    out.ladder.push_back(C);
    members.push_back(
        {C, degenerate_family_member(p, n, out.gauge, C, out.threshold.C0, profile).u});
    const auto b = check_family_bounds(p, n, out.gauge, profile, grid, C, exec);
    out.bounds.insert(out.bounds.end(), b.begin(), b.end());
  }
  FamilySampleConfig config;
  config.grid = grid;
  config.k_max = k_max;
  config.exec = exec;
  out.family = check_barrier_family(members, profile, p, n, config);
  return out;
}

CertificateReport check_scaling_equivariance(const DomainProfile& profile, double p, int n,
                                             double a, const BoundaryData& f_tilde,
                                             const SolverConfig& config, double tol) {
  auto [tilde, K] = scale_domain(profile, a, p);
  const GridField ut = solve_dirichlet(tilde, p, n, f_tilde, config);
  const BoundaryData f = [K = K, a, f_tilde](double r, double t) { return K * f_tilde(a * r, t); };
  const GridField u = solve_dirichlet(profile, p, n, f, config);
  if (ut.rows() < 2 || u.rows() < 1) throw DomainError("check_scaling_equivariance: store_all required");

  double scale = 0.0;
  for (double v : u.values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;

  double worst = -1.0;
  double wr = 0.0, wt = 0.0;
  std::size_t k = 0;
  const std::size_t ny = u.y.size();
  for (std::size_t row = 0; row < u.rows(); ++row) {
    const double t = u.stored_t[row];
    while (k + 2 < ut.rows() && ut.stored_t[k + 1] <= t) ++k;
    const double ta = ut.stored_t[k];
    const double tb = ut.stored_t[k + 1];
    const double w = std::clamp((t - ta) / (tb - ta), 0.0, 1.0);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      const double mapped = K * ((1.0 - w) * ut.at(k, iy) + w * ut.at(k + 1, iy));
      const double d = std::abs(u.at(row, iy) - mapped) / scale;
      if (d > worst) {
        worst = d;
        wr = u.y[iy] * profile.zeta(t);
        wt = t;
      }
    }
  }
  std::ostringstream subject;
  subject.precision(17);
  subject << "scaling a=" << a << " p=" << p << " n=" << n << " on " << profile.describe();
  auto rep = make_report(subject.str(), "relative mismatch |u - K u~(a x,t)| / max|u|",
                         field_meta(u), worst, wr, wt, Sense::nonpositive, tol);
  std::ostringstream note;
  note.precision(17);
  note << "K = " << K << "; n_y = " << config.n_y << ", c_step = " << config.c_step
       << ", geo_step = " << config.geo_step;
  rep.note = note.str();
  return rep;
}

CertificateReport check_comparison(const DomainProfile& profile, double p, int n,
                                   const BoundaryData& f1, const BoundaryData& f2,
                                   const SolverConfig& config, double tol) {
  const GridField u1 = solve_dirichlet(profile, p, n, f1, config);
  // Ordering of the data on the discrete parabolic boundary.
  const double t0 = profile.t0();
  for (double y : u1.y) {
    const double r = y * profile.zeta(t0);
    if (f1(r, t0) > f2(r, t0)) throw DomainError("check_comparison: f1 > f2 on the bottom slice");
  }
  for (double t : u1.t) {
    const double r = profile.zeta(t);
    if (f1(r, t) > f2(r, t)) throw DomainError("check_comparison: f1 > f2 on the lateral surface");
  }
  const GridField u2 = solve_dirichlet(profile, p, n, f2, config);
  if (u1.values.size() != u2.values.size()) {
    throw SolverError("check_comparison: runs produced different grids");
  }
  std::vector<double> diff(u1.values.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = u1.values[i] - u2.values[i];
  const Extremum e = fold_max(diff);
  const std::size_t row = e.index / u1.y.size();
  const double t = u1.stored_t[row];
  return make_report("comparison on " + profile.describe(), "max(u1 - u2)", field_meta(u1),
                     e.value, u1.y[e.index % u1.y.size()] * profile.zeta(t), t,
                     Sense::nonpositive, tol);
}

WitnessReport check_irregularity_witness(const Barrier& barrier, const SolverConfig& config,
                                         double tol, double fraction) {
  if (!barrier.domain) throw DomainError("check_irregularity_witness: barrier has no domain");
  const auto it = barrier.spec.constants.find("value_at_origin");
  if (it == barrier.spec.constants.end()) {
    throw DomainError("check_irregularity_witness: barrier has no value at the origin");
  }
  const DomainProfile& profile = *barrier.domain;
  const double f0 = it->second;
  const SpaceTimeFunction& u = barrier.u;
  const BoundaryData f = [u, f0](double r, double t) {
    return (r == 0.0 && t == 0.0) ? f0 : u.eval(r, t);
  };
  const double p = barrier.spec.params.p;
  const int n = barrier.spec.params.n;
  const GridField field = solve_dirichlet(profile, p, n, f, config);

  std::vector<double> diff(field.values.size());
  const std::size_t ny = field.y.size();
  for (std::size_t row = 0; row < field.rows(); ++row) {
    const double t = field.stored_t[row];
    const double z = profile.zeta(t);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      diff[row * ny + iy] = field.at(row, iy) - u.eval(field.y[iy] * z, t);
    }
  }
  const Extremum e = fold_max(diff);
  const double te = field.stored_t[e.index / ny];

  WitnessReport out;
  out.f_origin = f0;
  out.endpoint = field.axis_trace.back().second;
  out.below_barrier = make_report(u.label + " witness", "max(solution - barrier)", field_meta(field),
                                  e.value, field.y[e.index % ny] * profile.zeta(te), te,
                                  Sense::nonpositive, tol);
  std::ostringstream cond;
  cond.precision(17);
  cond << "solution(0,-eps_min) - " << fraction << " f(0,0)";
  out.origin_gap = make_report(u.label + " witness", cond.str(), field_meta(field),
                               out.endpoint - fraction * f0, 0.0, field.axis_trace.back().first,
                               Sense::nonpositive, 0.0);
  return out;
}

}  // namespace petrocheck
