#include <gtest/gtest.h>

#include <cmath>

#include "oracle_values.hpp"
#include "petrocheck/barriers.hpp"
#include "petrocheck/verify.hpp"

using namespace petrocheck;

namespace {

Gauge reference_gauge(double p, int n) {
  Gauge g;
  g.beta = n * (p - 2.0) / lambda_of(p, n);
  const double beta = g.beta;
  g.delta = [beta](double t) { return 1.5 * std::pow(-t, beta); };
  g.ddelta = [beta](double t) { return -1.5 * beta * std::pow(-t, beta - 1.0); };
  g.monotone_flag = true;
  return g;
}

// Relative agreement of closed-form derivatives with central differences.
void expect_derivatives_match(const SpaceTimeFunction& u, const DomainProfile& dom, double p,
                              int n) {
  for (double t : {-0.8, -0.3, -0.05}) {
    for (double y : {0.15, 0.4, 0.7, 0.9}) {
      const double r = y * dom.zeta(t);
      const double ht = 1e-6 * std::abs(t);
      const double hr = 1e-6 * r;
      const double dt = (u(r, t + ht) - u(r, t - ht)) / (2 * ht);
      const double dr = (u(r + hr, t) - u(r - hr, t)) / (2 * hr);
      EXPECT_NEAR(u.dt(r, t), dt, 1e-6 * std::max(1.0, std::abs(dt))) << u.label << " r=" << r << " t=" << t;
      EXPECT_NEAR(u.dr(r, t), dr, 1e-6 * std::max(1.0, std::abs(dr))) << u.label << " r=" << r << " t=" << t;
      // Richardson extrapolation of the second-order oracle.
      const double l1 = p_laplacian_radial_fd(u, p, n, r, t, {2e-2 * r, 0.0});
      const double l2 = p_laplacian_radial_fd(u, p, n, r, t, {1e-2 * r, 0.0});
      const double lap = (4.0 * l2 - l1) / 3.0;
      EXPECT_NEAR(u.plap(r, t), lap, 1e-6 * std::max(1.0, std::abs(lap))) << u.label << " r=" << r << " t=" << t;
    }
  }
}

}  // namespace

TEST(Singular, IrregularityBarrierValues) {
  const auto b = singular_irregularity_barrier(1.5, 0.25, 2);
  EXPECT_NEAR(b.u(0.0, -1.0), oracle::singular_irregularity_axis_p15_q025_n2, 1e-13);
  EXPECT_EQ(b.u(0.0, 0.0), 1.0);
  double prev = -1e300;
  for (double t : {-1.0, -1e-1, -1e-2, -1e-4, -1e-8}) {
    const double v = b.u(0.0, t);
    EXPECT_LT(v, 0.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_GT(prev, -1e-4);
  EXPECT_THROW(singular_irregularity_barrier(1.5, 2.0 / 3.0, 2), DomainError);
  EXPECT_THROW(singular_irregularity_barrier(2.5, 0.1, 2), DomainError);
}

TEST(Singular, Constants) {
  EXPECT_EQ(b_const(1.5, 2), oracle::B_p15_n2);
  EXPECT_NEAR(m_const(1.5, 0.25, 2), oracle::M_p15_q025_n2, 1e-15);
  for (double p : {1.1, 1.5, 1.9}) {
    for (int n : {1, 2, 5}) EXPECT_LE(b_const(p, n), 1.0);
  }
  EXPECT_THROW(m_const(1.5, 0.7, 2), DomainError);
  EXPECT_THROW(b_const(2.0, 2), DomainError);
}

TEST(Singular, TraditionalPasting) {
  const auto b = singular_traditional_barrier(1.5, 0.25, 2);
  const double B = b.spec.constants.at("B");
  const double M = b.spec.constants.at("M");
  EXPECT_EQ(b.u(std::pow(0.5 * B, 1.0 / 3.0) * 1.01, -0.5), M);
  for (double t : {-1.0, -0.1, -1e-3}) {
    EXPECT_DOUBLE_EQ(b.u(0.0, t), std::min(std::pow(-t, 2.0) * B, M));
  }
  EXPECT_LT(b.u(0.0, -1e-6), 1e-11);
}

TEST(Singular, SmallDataBound) {
  const auto g = small_data_bound_g(1.5, 0.25, 2);
  EXPECT_NEAR(g(0.3, -1.0), oracle::g_p15_q025_n2_tm1, 1e-15);
  EXPECT_NEAR(g(0.0, -0.01), oracle::g_p15_q025_n2_tm001, 1e-17);
  EXPECT_EQ(g(0.0, -1.0), g(0.0, -0.5));
  EXPECT_LT(g(0.0, -1e-9), 1e-17);
}

TEST(Degenerate, IrregularityBarrier) {
  EXPECT_NEAR(degenerate_c_max(3.0, 2), oracle::c_max_p3_n2, 1e-16);
  const auto b = degenerate_irregularity_barrier(3.0, 2, 0.02);
  for (double t : {-1.0, -0.5, -1e-6}) EXPECT_EQ(b.u(0.0, t), 0.0);
  try {
    degenerate_irregularity_barrier(3.0, 2, 0.03);
    FAIL() << "expected rejection";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("c_max"), std::string::npos);
  }
}

TEST(Degenerate, SmallData) {
  const auto b = degenerate_small_data_barrier(3.0, 1.0 / 3.0, 2, 0.5);
  EXPECT_NEAR(b.spec.constants.at("A"), oracle::A_p3_n2_beta05, 1e-17);
  EXPECT_NEAR(b.u(0.3, -0.5), oracle::small_data_p3_n2_beta05_r03_tm05, 1e-18);
  EXPECT_EQ(b.u(0.0, -0.5), 0.0);
  EXPECT_EQ(b.u(0.0, 0.0), 0.0);
  EXPECT_THROW(degenerate_small_data_barrier(3.0, 1.0 / 3.0, 2, 1.0), DomainError);
  EXPECT_THROW(degenerate_small_data_barrier(3.0, 0.5, 2, 0.5), DomainError);
}

TEST(Degenerate, FamilyMemberAgainstOracle) {
  const auto g = reference_gauge(3.0, 1);
  const auto b = degenerate_family_member(3.0, 1, g, 4.0);
  EXPECT_NEAR(b.u(0.2, -0.5), oracle::family_w, 1e-13);
  EXPECT_NEAR(b.u.dt(0.2, -0.5), oracle::family_dt, 1e-13);
  EXPECT_NEAR(b.u.dr(0.2, -0.5), oracle::family_dr, 1e-13);
  EXPECT_NEAR(b.u.plap(0.2, -0.5), oracle::family_plap, 1e-12);
  const auto k = family_pieces(3.0, 1, g, 4.0, 0.0, -0.3);
  EXPECT_EQ(k.Q, 4.0);
  EXPECT_DOUBLE_EQ(b.u(0.0, -0.3), k.rho);
  EXPECT_GT(k.rho, 0.0);
}

TEST(Degenerate, FamilyMemberPreconditions) {
  auto g = reference_gauge(3.0, 1);
  const auto warned = degenerate_family_member(3.0, 1, g, 1.0, 2.0);
  EXPECT_EQ(warned.spec.warnings.size(), 1u);
  EXPECT_TRUE(degenerate_family_member(3.0, 1, g, 4.0, 2.0).spec.warnings.empty());
  g.ddelta = nullptr;
  EXPECT_THROW(degenerate_family_member(3.0, 1, g, 4.0), DomainError);
  g = reference_gauge(3.0, 1);
  g.monotone_flag = false;
  EXPECT_THROW(degenerate_family_member(3.0, 1, g, 4.0), DomainError);
  EXPECT_THROW(degenerate_family_member(1.5, 1, reference_gauge(3.0, 1), 4.0), DomainError);
}

TEST(AllKinds, ClosedDerivativesMatchDifferences) {
  for (double p : {1.3, 1.5, 1.8}) {
    const auto a = singular_irregularity_barrier(p, 0.5 / p, 2);
    expect_derivatives_match(a.u, *a.domain, p, 2);
    expect_derivatives_match(singular_traditional_v(p, 0.5 / p, 2), *a.domain, p, 2);
  }
  for (double p : {2.5, 3.0, 4.0}) {
    const auto c = degenerate_irregularity_barrier(p, 2, 0.5 * degenerate_c_max(p, 2));
    expect_derivatives_match(c.u, *c.domain, p, 2);
    const auto d = degenerate_small_data_barrier(p, 1.0 / p, 2, 0.5);
    expect_derivatives_match(d.u, *d.domain, p, 2);
    const auto prof = DomainProfile::power(1.0, 0.5);
    const auto e = degenerate_family_member(p, 1, enveloped_gauge(prof, p, 1), 3.0);
    expect_derivatives_match(e.u, prof, p, 1);
  }
}

TEST(AllKinds, ConstantsReproduceFormulas) {
  const auto b = singular_traditional_barrier(1.7, 0.3, 3);
  const double B = std::min(3 * 0.3 * std::pow(1.7 / 0.7, 0.7), 1.0);
  EXPECT_NEAR(b.spec.constants.at("B"), B, 1e-12 * B);
  const double M = std::pow(B / 2, 1 + 0.7 / (1.7 * 0.3 * 0.3));
  EXPECT_NEAR(b.spec.constants.at("M"), M, 1e-12 * M);
  const double lam = lambda_of(4.0, 3);
  const double A = std::pow(0.4 / lam * std::pow(0.5, 3.0), 0.5);
  EXPECT_NEAR(degenerate_small_data_barrier(4.0, 0.25, 3, 0.4).spec.constants.at("A"), A, 1e-12 * A);
}

TEST(AllKinds, SignCertificatesOnReferenceCusps) {
  std::vector<Barrier> cases = {
      singular_irregularity_barrier(1.5, 0.25, 2),
      singular_traditional_barrier(1.5, 0.25, 2),
      degenerate_irregularity_barrier(3.0, 2, degenerate_c_max(3.0, 2)),
      degenerate_small_data_barrier(3.0, 1.0 / 3.0, 2, 0.5),
  };
  for (const auto& b : cases) {
    const auto grid = certificate_grid(*b.domain, 64, 64);
    const auto rep = check_sign(b.u, *b.domain, b.spec.params.p, b.spec.params.n, grid,
                                Sense::nonnegative);
    EXPECT_TRUE(rep.pass) << b.u.label << " worst " << rep.worst_violation;
  }
}

TEST(Family, ElementaryInequality) {
  for (double p : {2.1, 2.5, 3.0, 4.0, 8.0}) {
    const double a = (p - 1.0) / (p - 2.0);
    for (int k = 0; k <= 200; ++k) {
      const double s = std::pow(10.0, -8.0 + 9.0 * k / 200.0);
      // (1+s)^a - 1 < a s (1+s)^{a-1}, evaluated without cancellation.
      EXPECT_LT(std::expm1(a * std::log1p(s)), a * s * std::exp((a - 1) * std::log1p(s))) << "p=" << p << " s=" << s;
    }
  }
}

TEST(Family, FindC0Terminates) {
  const auto prof = DomainProfile::power(1.0, 0.5);
  const auto g = enveloped_gauge(prof, 3.0, 1);
  const auto grid = certificate_grid(prof, 64, 64);
  const auto th = find_C0(3.0, 1, g, prof, grid);
  EXPECT_GT(th.C0, 0.0);
  EXPECT_TRUE(th.trail.back().ok());
  EXPECT_EQ(static_cast<int>(th.trail.size()), th.doublings + 1);
  EXPECT_GT(th.theta, 0.0);
  const auto c = family_conditions(3.0, 1, g, prof, grid, th.C0);
  EXPECT_TRUE(c.q_sandwich && c.elem_inequality && c.h_nonpositive && c.c_condition);
}
