#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace petrocheck {

/// Raised when an operation is called outside the parameter range where its
/// formulas are defined (e.g. lambda <= 0 for the Barenblatt scale).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when the discrete solver cannot converge a time step.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// lambda = n(p-2) + p, the Barenblatt scaling exponent.
double lambda_of(double p, int n);

/// Problem parameters of the p-parabolic equation on a cusp domain.
struct Params {
  double p = 2.0;
  int n = 1;
  std::optional<double> q;
  std::optional<double> K;
  double t0 = -1.0;

  /// Throws DomainError on p <= 1, n < 1, t0 >= 0, or nonpositive q/K.
  void validate() const;

  double lambda() const { return lambda_of(p, n); }
  /// p/(p-2); the exponent that makes C|x|^alpha scale like the equation.
  double alpha() const;
  /// n(p-2)/lambda; requires lambda > 0.
  double beta() const;
  /// beta/(p-1).
  double gamma() const;

  bool operator==(const Params&) const = default;
};

}  // namespace petrocheck
