#include "petrocheck/params.hpp"

namespace petrocheck {

double lambda_of(double p, int n) {
  if (!(p > 1.0) || n < 1) {
    throw DomainError("lambda_of: requires p > 1 and n >= 1");
  }
  return n * (p - 2.0) + p;
}

void Params::validate() const {
  if (!(p > 1.0)) throw DomainError("p must satisfy p > 1");
  if (n < 1) throw DomainError("n must satisfy n >= 1");
  if (!(t0 < 0.0)) throw DomainError("t0 must satisfy t0 < 0");
  if (q && !(*q > 0.0)) throw DomainError("q must satisfy q > 0");
  if (K && !(*K > 0.0)) throw DomainError("K must satisfy K > 0");
}

double Params::alpha() const {
  if (p == 2.0) throw DomainError("alpha = p/(p-2) is undefined for p = 2");
  return p / (p - 2.0);
}

double Params::beta() const {
  const double lam = lambda();
  if (!(lam > 0.0)) throw DomainError("beta requires lambda = n(p-2)+p > 0");
  return n * (p - 2.0) / lam;
}

double Params::gamma() const { return beta() / (p - 1.0); }

}  // namespace petrocheck
