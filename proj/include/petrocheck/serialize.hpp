#pragma once

// JSON and CSV forms of specs, certificates, solver configs and fields.
// Every JSON document carries "schema": "petrocheck/1".

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "petrocheck/barriers.hpp"
#include "petrocheck/solver.hpp"
#include "petrocheck/verify.hpp"

namespace petrocheck {

inline constexpr const char* kSchema = "petrocheck/1";

/// FNV-1a 64-bit hash of the grid's time and y levels (bit patterns).
std::uint64_t grid_hash(const SampleGrid& grid);
std::string hex(std::uint64_t value);

nlohmann::json to_json(const Params& params);
Params params_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BarrierSpec& spec, const SampleGrid* grid = nullptr);
nlohmann::json to_json(const CertificateReport& report);

/// One row per report: subject,condition,sense,tolerance,worst_violation,worst_r,worst_t,pass,inconclusive.
void write_certificates_csv(std::ostream& os, const std::vector<CertificateReport>& reports);

nlohmann::json to_json(const SolverConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
SolverConfig solver_config_from_json(const nlohmann::json& j);

/// Columns t,y,r,u for every stored row.
void write_field_csv(std::ostream& os, const GridField& field);

nlohmann::json to_json(const RegularityVerdict& verdict);
nlohmann::json to_json(const ProbeResult& probe);

/// A reproducible CLI invocation.
struct ExperimentConfig {
  std::string command;
  Params params;
  std::string kind;
  std::optional<double> C;
  std::optional<double> beta;
  int grid_t = 128;
  int grid_y = 128;
  SolverConfig solver;
  std::vector<double> p_list;
  std::vector<double> q_list;
  bool with_probe = false;
  /// lemma-check / barenblatt-check sample count.
  int samples = 50;
  /// scale-check factor.
  double a = 2.0;
  /// solve: profile kind name, optional CSV table, and datum.
  std::string profile = "power";
  std::string profile_csv;
  std::string data = "probe";
  double value = 1.0;
  std::string output;
  std::string csv;

  bool operator==(const ExperimentConfig&) const = default;
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

/// Writes `doc` with a trailing newline (indent 2).
void write_json(std::ostream& os, const nlohmann::json& doc);

}  // namespace petrocheck
