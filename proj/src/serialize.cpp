#include "petrocheck/serialize.hpp"

#include <cstring>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "petrocheck/params.hpp"

namespace petrocheck {

using nlohmann::json;

namespace {

void fnv_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* b = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= b[i];
    h *= 0x100000001b3ULL;
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* what) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* key : keys) known = known || k == key;
    if (!known) throw DomainError(std::string(what) + ": unknown key '" + k + "'");
  }
}

}  // namespace

std::uint64_t grid_hash(const SampleGrid& grid) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto* v : {&grid.t, &grid.y}) {
    const std::uint64_t count = v->size();
    fnv_bytes(h, &count, sizeof count);
    for (double x : *v) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      fnv_bytes(h, &bits, sizeof bits);
    }
  }
  return h;
}

std::string hex(std::uint64_t value) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << value;
  return os.str();
}

json to_json(const Params& params) {
  json j = {{"p", params.p}, {"n", params.n}, {"t0", params.t0}};
  j["q"] = params.q ? json(*params.q) : json(nullptr);
  j["K"] = params.K ? json(*params.K) : json(nullptr);
  return j;
}

Params params_from_json(const json& j) {
  reject_unknown(j, {"p", "n", "q", "K", "t0"}, "params");
  Params p;
  take(j, "p", p.p);
  take(j, "n", p.n);
  take(j, "t0", p.t0);
  if (j.contains("q") && !j.at("q").is_null()) p.q = j.at("q").get<double>();
  if (j.contains("K") && !j.at("K").is_null()) p.K = j.at("K").get<double>();
  return p;
}

json to_json(const BarrierSpec& spec, const SampleGrid* grid) {
  json j = {{"schema", kSchema},
            {"kind", to_string(spec.kind)},
            {"params", to_json(spec.params)},
            {"constants", spec.constants},
            {"warnings", spec.warnings}};
  j["grid_hash"] = grid ? json(hex(grid_hash(*grid))) : json(nullptr);
  return j;
}

json to_json(const CertificateReport& r) {
  return {{"schema", kSchema},
          {"subject", r.subject},
          {"condition", r.condition},
          {"grid",
           {{"n_t", r.grid.n_t},
            {"n_y", r.grid.n_y},
            {"t_first", r.grid.t_first},
            {"t_last", r.grid.t_last},
            {"spacing", r.grid.spacing}}},
          {"worst_violation", r.worst_violation},
          {"worst_location", {{"r", r.worst_r}, {"t", r.worst_t}}},
          {"pass", r.pass},
          {"tolerance", r.tolerance},
          {"sense", to_string(r.sense)},
          {"label", r.finite_sample ? "FINITE-SAMPLE" : "EXACT"},
          {"inconclusive", r.inconclusive},
          {"note", r.note}};
}

void write_certificates_csv(std::ostream& os, const std::vector<CertificateReport>& reports) {
  os << "subject,condition,sense,tolerance,worst_violation,worst_r,worst_t,pass,inconclusive\n";
  for (const auto& r : reports) {
    os << csv_field(r.subject) << ',' << csv_field(r.condition) << ',' << to_string(r.sense)
       << ',' << num(r.tolerance) << ',' << num(r.worst_violation) << ',' << num(r.worst_r) << ','
       << num(r.worst_t) << ',' << (r.pass ? "true" : "false") << ','
       << (r.inconclusive ? "true" : "false") << '\n';
  }
}

json to_json(const SolverConfig& c) {
  return {{"n_y", c.n_y},
          {"eps_reg", c.eps_reg},
          {"eps_min", c.eps_min},
          {"c_step", c.c_step},
          {"geo_step", c.geo_step},
          {"newton_max", c.newton_max},
          {"picard_max", c.picard_max},
          {"tol", c.tol},
          {"max_halvings", c.max_halvings},
          {"store_all", c.store_all}};
}

SolverConfig solver_config_from_json(const json& j) {
  reject_unknown(j,
                 {"n_y", "eps_reg", "eps_min", "c_step", "geo_step", "newton_max", "picard_max",
                  "tol", "max_halvings", "store_all"},
                 "solver config");
  SolverConfig c;
  take(j, "n_y", c.n_y);
  take(j, "eps_reg", c.eps_reg);
  take(j, "eps_min", c.eps_min);
  take(j, "c_step", c.c_step);
  take(j, "geo_step", c.geo_step);
  take(j, "newton_max", c.newton_max);
  take(j, "picard_max", c.picard_max);
  take(j, "tol", c.tol);
  take(j, "max_halvings", c.max_halvings);
  take(j, "store_all", c.store_all);
  return c;
}

void write_field_csv(std::ostream& os, const GridField& field) {
  os << "t,y,r,u\n";
  for (std::size_t row = 0; row < field.rows(); ++row) {
    const double t = field.stored_t[row];
    const double z = field.profile.zeta(t);
    for (std::size_t iy = 0; iy < field.y.size(); ++iy) {
      os << num(t) << ',' << num(field.y[iy]) << ',' << num(field.y[iy] * z) << ','
         << num(field.at(row, iy)) << '\n';
    }
  }
}

json to_json(const ProbeResult& probe) {
  json levels = json::array();
  for (std::size_t i = 0; i < probe.ladder.size(); ++i) {
    const auto& l = probe.ladder[i];
    json level = {{"eps_min", l.eps_min}, {"n_y", l.n_y}, {"c_step", l.c_step},
                  {"geo_step", l.geo_step}};
    if (i < probe.endpoints.size()) level["endpoint"] = probe.endpoints[i];
    if (i < probe.traces.size()) {
      json trace = json::array();
      for (const auto& [t, u] : probe.traces[i]) trace.push_back({t, u});
      level["trace"] = trace;
    }
    levels.push_back(level);
  }
  return {{"trend", to_string(probe.trend)},
          {"thresholds",
           {{"attains_endpoint", probe.thresholds.attains_endpoint},
            {"attains_ratio", probe.thresholds.attains_ratio},
            {"gap_relative", probe.thresholds.gap_relative},
            {"gap_floor", probe.thresholds.gap_floor}}},
          {"levels", levels},
          {"note", probe.note}};
}

json to_json(const RegularityVerdict& v) {
  json j = {{"theorem_verdict", to_string(v.theorem_verdict)},
            {"certificate_refs", v.certificate_refs},
            {"endpoints", v.endpoints},
            {"warning", v.warning}};
  j["numeric_trend"] = v.numeric_trend ? json(to_string(*v.numeric_trend)) : json(nullptr);
  json trace = json::array();
  for (const auto& [t, u] : v.numeric_trace) trace.push_back({t, u});
  j["numeric_trace"] = trace;
  return j;
}

json to_json(const ExperimentConfig& c) {
  json j = {{"schema", kSchema},
            {"command", c.command},
            {"params", to_json(c.params)},
            {"kind", c.kind},
            {"grid_t", c.grid_t},
            {"grid_y", c.grid_y},
            {"solver", to_json(c.solver)},
            {"p_list", c.p_list},
            {"q_list", c.q_list},
            {"with_probe", c.with_probe},
            {"samples", c.samples},
            {"a", c.a},
            {"profile", c.profile},
            {"profile_csv", c.profile_csv},
            {"data", c.data},
            {"value", c.value},
            {"output", c.output},
            {"csv", c.csv}};
  j["C"] = c.C ? json(*c.C) : json(nullptr);
  j["beta"] = c.beta ? json(*c.beta) : json(nullptr);
  return j;
}

ExperimentConfig experiment_config_from_json(const json& j) {
  reject_unknown(j,
                 {"schema", "command", "params", "kind", "C", "beta", "grid_t", "grid_y",
                  "solver", "p_list", "q_list", "with_probe", "samples", "a", "profile",
                  "profile_csv", "data", "value", "output", "csv"},
                 "experiment config");
  if (j.contains("schema") && j.at("schema") != kSchema) {
    throw DomainError("experiment config: unsupported schema " + j.at("schema").dump());
  }
  ExperimentConfig c;
  take(j, "command", c.command);
  if (j.contains("params")) c.params = params_from_json(j.at("params"));
  take(j, "kind", c.kind);
  if (j.contains("C") && !j.at("C").is_null()) c.C = j.at("C").get<double>();
  if (j.contains("beta") && !j.at("beta").is_null()) c.beta = j.at("beta").get<double>();
  take(j, "grid_t", c.grid_t);
  take(j, "grid_y", c.grid_y);
  if (j.contains("solver")) c.solver = solver_config_from_json(j.at("solver"));
  take(j, "p_list", c.p_list);
  take(j, "q_list", c.q_list);
  take(j, "with_probe", c.with_probe);
  take(j, "samples", c.samples);
  take(j, "a", c.a);
  take(j, "profile", c.profile);
  take(j, "profile_csv", c.profile_csv);
  take(j, "data", c.data);
  take(j, "value", c.value);
  take(j, "output", c.output);
  take(j, "csv", c.csv);
  return c;
}

void write_json(std::ostream& os, const json& doc) { os << doc.dump(2) << '\n'; }

}  // namespace petrocheck
