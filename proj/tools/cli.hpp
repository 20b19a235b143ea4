#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "petrocheck/serialize.hpp"

namespace petrocheck::cli {

enum ExitCode : int {
  kPass = 0,
  kUsage = 1,
  kCertificateFailure = 2,
  kSolverFailure = 3,
};

/// Parses argv-style arguments (without the program name) and runs the
/// selected subcommand. Reports go to `out` unless --output is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Runs a fully specified experiment.
int execute(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace petrocheck::cli
