#include <cmath>
#include <sstream>

#include "petrocheck/grid_kernels.hpp"
#include "petrocheck/params.hpp"
#include "petrocheck/solver.hpp"

namespace petrocheck {

namespace {

bool at_borderline(double p, double q) { return std::abs(q - 1.0 / p) <= 1e-12 / p; }

}  // namespace

std::vector<LadderLevel> default_ladder(double t0) {
  const double scale = std::abs(t0);
  return {
      {1e-2 * scale, 50, 0.5, 0.02},
      {1e-3 * scale, 100, 0.25, 0.01},
      {1e-4 * scale, 200, 0.125, 0.005},
  };
}

BoundaryData default_probe() {
  return [](double r, double t) { return std::min(1.0, std::hypot(r, t) / 0.1); };
}

std::string to_string(Trend trend) {
  switch (trend) {
    case Trend::attains: return "attains";
    case Trend::gap: return "gap";
    case Trend::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

Trend classify_trend(std::span<const double> endpoints, const TrendThresholds& th) {
  const std::size_t m = endpoints.size();
  if (m < 3) return Trend::inconclusive;
  for (double e : endpoints) {
    if (!std::isfinite(e)) return Trend::inconclusive;
  }
  const double last = endpoints[m - 1];

  bool shrinking = std::abs(last) < th.attains_endpoint;
  for (std::size_t i = 1; i < m && shrinking; ++i) {
    const double prev = std::abs(endpoints[i - 1]);
    const double cur = std::abs(endpoints[i]);
    // An identically vanishing trace counts as attained.
    if (prev == 0.0) {
      shrinking = cur == 0.0;
    } else {
      shrinking = cur / prev < th.attains_ratio;
    }
  }
  if (shrinking) return Trend::attains;

  bool stable = last >= th.gap_floor;
  for (std::size_t i = m - 2; i < m && stable; ++i) {
    const double prev = endpoints[i - 1];
    stable = std::abs(endpoints[i] - prev) <= th.gap_relative * std::abs(prev);
  }
  return stable ? Trend::gap : Trend::inconclusive;
}

ProbeResult probe_origin(const DomainProfile& profile, double p, int n, const BoundaryData& f,
                         const std::vector<LadderLevel>& ladder, const SolverConfig& base,
                         const TrendThresholds& thresholds) {
  ProbeResult result;
  result.ladder = ladder;
  result.thresholds = thresholds;
  if (profile.kind() == ProfileKind::power && p < 2.0 && at_borderline(p, profile.q())) {
    result.trend = Trend::inconclusive;
    result.note = "borderline q = 1/p with 1 < p < 2: continuum behaviour unresolved, no trend reported";
    return result;
  }

  result.traces.resize(ladder.size());
  result.endpoints.resize(ladder.size());
  for_each_index(ladder.size(), [&](std::size_t i) {
    SolverConfig config = base;
    config.eps_min = ladder[i].eps_min;
    config.n_y = ladder[i].n_y;
    config.c_step = ladder[i].c_step;
    config.geo_step = ladder[i].geo_step;
    config.store_all = false;
    const GridField field = solve_dirichlet(profile, p, n, f, config);
    result.traces[i] = field.axis_trace;
    result.endpoints[i] = field.axis_trace.back().second;
  });
  result.trend = classify_trend(result.endpoints, thresholds);
  if (ladder.size() < 3) result.note = "ladder shorter than 3 levels";
  return result;
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::regular: return "regular";
    case Verdict::irregular: return "irregular";
    case Verdict::unknown: return "unknown";
  }
  return "unknown";
}

RegularityVerdict classify(double p, double q) {
  if (!(p > 1.0)) throw DomainError("classify: requires p > 1");
  if (!(q > 0.0)) throw DomainError("classify: requires q > 0");
  RegularityVerdict v;
  const bool border = at_borderline(p, q);
  const bool above = q > 1.0 / p && !border;
  if (p > 2.0) {
    v.theorem_verdict = above ? Verdict::regular : Verdict::irregular;
    v.certificate_refs.push_back(above ? "degenerate_family_member" : "degenerate_irregularity");
  } else if (p == 2.0) {
    v.theorem_verdict = (above || border) ? Verdict::regular : Verdict::irregular;
  } else if (border) {
    v.theorem_verdict = Verdict::unknown;
    v.certificate_refs.push_back("singular_traditional");
    v.warning = "q = 1/p with 1 < p < 2 is an open case; a traditional barrier exists but does not decide regularity";
  } else if (above) {
    v.theorem_verdict = Verdict::regular;
  } else {
    v.theorem_verdict = Verdict::irregular;
    v.certificate_refs.push_back("singular_irregularity");
  }
  return v;
}

}  // namespace petrocheck
