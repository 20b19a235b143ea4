#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "oracle_values.hpp"
#include "petrocheck/domains.hpp"
#include "petrocheck/params.hpp"

using namespace petrocheck;

namespace {

// zeta(t) = (-t)^q (1 + eps sin(omega log(-t))) tabulated on a geometric grid.
DomainProfile wiggly_power(double q, double eps, double omega) {
  std::vector<double> t, z;
  const int N = 400;
  for (int i = 0; i < N; ++i) {
    const double s = -std::pow(10.0, -10.0 * i / (N - 1));
    t.push_back(s);
    z.push_back(std::pow(-s, q) * (1.0 + eps * std::sin(omega * std::log(-s))));
  }
  return DomainProfile::tabulated(t, z);
}

// slack is relative to the previous value.
bool weighted_nondecreasing(const Gauge& g, double slack) {
  const auto h = g.weighted();
  for (std::size_t i = 1; i < h.size(); ++i) {
    if (h[i] < h[i - 1] * (1.0 - slack)) return false;
  }
  return true;
}

}  // namespace

TEST(Profile, PowerExamples) {
  const auto a = DomainProfile::power(1.0, 0.5, -1.0);
  EXPECT_DOUBLE_EQ(a.zeta(-0.25), 0.5);
  const auto b = DomainProfile::power(2.0, 1.0 / 3.0, -1.0);
  EXPECT_TRUE(b.contains(0.9, -0.125));
  EXPECT_FALSE(b.contains(1.1, -0.125));
  EXPECT_FALSE(b.contains(0.0, 0.0));
  EXPECT_FALSE(b.contains(0.1, -1.5));
  EXPECT_THROW(DomainProfile::power(0.0, 0.5), DomainError);
  EXPECT_THROW(DomainProfile::power(1.0, -0.5), DomainError);
  EXPECT_THROW(DomainProfile::power(1.0, 0.5, 0.0), DomainError);
}

TEST(Profile, PowerDerivative) {
  const auto a = DomainProfile::power(1.5, 0.3, -1.0);
  for (double t : {-0.9, -0.2, -1e-3}) {
    const double h = 1e-7 * std::abs(t);
    EXPECT_NEAR(a.dzeta(t), (a.zeta(t + h) - a.zeta(t - h)) / (2 * h), 1e-6 * std::abs(a.dzeta(t)));
  }
}

TEST(Profile, LogLog) {
  EXPECT_THROW(DomainProfile::petrovskii_loglog(1.0, -1.0), DomainError);
  EXPECT_THROW(DomainProfile::petrovskii_loglog(1.0, -std::exp(-1.0)), DomainError);
  const auto z = DomainProfile::petrovskii_loglog(2.0, -0.1);
  EXPECT_NEAR(z.zeta(-0.01), oracle::loglog_zeta_K2_tm001, 1e-15);
  EXPECT_NEAR(z.dzeta(-0.01), oracle::loglog_dzeta_K2_tm001, 1e-12);
}

TEST(Profile, MakeProfileDispatch) {
  const auto p = make_profile(ProfileKind::power, 1.0, 0.5, -1.0);
  EXPECT_EQ(p.kind(), ProfileKind::power);
  EXPECT_EQ(profile_kind_from_string(to_string(ProfileKind::petrovskii_loglog)),
            ProfileKind::petrovskii_loglog);
  EXPECT_THROW(make_profile(ProfileKind::tabulated, 1.0, 0.5, -1.0), DomainError);
}

TEST(Profile, TabulatedFromCsv) {
  const std::string path = ::testing::TempDir() + "profile.csv";
  {
    std::ofstream f(path);
    f << "t,zeta\n";
    for (int i = 0; i <= 40; ++i) {
      const double t = -1.0 + 0.99 * i / 40.0;
      f.precision(17);
      f << t << ',' << std::sqrt(-t) << '\n';
    }
  }
  const auto p = DomainProfile::from_csv(path);
  EXPECT_EQ(p.kind(), ProfileKind::tabulated);
  EXPECT_DOUBLE_EQ(p.t0(), -1.0);
  EXPECT_NEAR(p.zeta(-0.5), std::sqrt(0.5), 1e-4);
  EXPECT_LT(p.dzeta(-0.5), 0.0);
  EXPECT_THROW(p.zeta(-0.001), DomainError);
  std::remove(path.c_str());
  EXPECT_THROW(DomainProfile::from_csv(path), DomainError);
  EXPECT_THROW(DomainProfile::tabulated({-1.0, -2.0}, {1.0, 1.0}), DomainError);
}

TEST(Profile, MonotoneCubicPreservesMonotonicity) {
  const MonotoneCubic c({0.0, 1.0, 2.0, 3.0}, {0.0, 0.1, 2.0, 2.05});
  double prev = c.value(-1.0);
  for (int i = 0; i <= 300; ++i) {
    const double v = c.value(-0.5 + 4.0 * i / 300.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
  EXPECT_DOUBLE_EQ(c.value(1.0), 0.1);
  EXPECT_EQ(c.derivative(5.0), 0.0);
}

TEST(Gauge, Examples) {
  // q = 1/lambda: delta == 1.
  const double p = 3.0;
  const int n = 2;
  const auto g = gauge_of(DomainProfile::power(1.0, 1.0 / lambda_of(p, n)), p, n);
  for (std::size_t i = 0; i < g.t.size(); i += 17) EXPECT_NEAR(g.values[i], 1.0, 1e-12);
  const auto g2 = gauge_of(DomainProfile::power(1.0, 0.5), 3.0, 2);
  EXPECT_NEAR(g2.delta(-1.0), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(g2.beta, 0.4);
  EXPECT_THROW(gauge_of(DomainProfile::power(1.0, 0.5), 1.2, 5), DomainError);
}

TEST(Gauge, GammaLimitSeparatesExponents) {
  // Near q = 1/p the decay (-t)^{1.5q-0.5} is too slow to reach 1e-2 on the samples.
  for (double q : {0.5, 0.6, 0.8}) {
    EXPECT_TRUE(gamma_limit(gauge_of(DomainProfile::power(1.0, q), 3.0, 1), 3.0).vanishes) << q;
  }
  for (double q : {0.2, 0.3, 1.0 / 3.0}) {
    EXPECT_FALSE(gamma_limit(gauge_of(DomainProfile::power(1.0, q), 3.0, 1), 3.0).vanishes) << q;
  }
}

TEST(RunningSup, Examples) {
  const std::vector<double> a{3, 1, 2};
  EXPECT_EQ(running_sup(a), (std::vector<double>{3, 3, 3}));
  const std::vector<double> b{1, 4, 2, 5};
  EXPECT_EQ(running_sup(b), (std::vector<double>{1, 4, 4, 5}));
  const std::vector<double> c{1, 2, 2, 7};
  EXPECT_EQ(running_sup(c), c);
  EXPECT_THROW(running_sup(std::vector<double>{}), DomainError);
}

TEST(RunningSup, IdempotentAndDominating) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> h(100);
    for (double& x : h) x = nd(rng);
    const auto s = running_sup(h);
    EXPECT_EQ(running_sup(s), s);
    for (std::size_t i = 0; i < h.size(); ++i) {
      EXPECT_GE(s[i], h[i]);
      if (i > 0) EXPECT_GE(s[i], s[i - 1]);
    }
  }
}

TEST(Envelope, SmoothPowerGivesConstantMultiple) {
  const double p = 3.0;
  const int n = 1;
  const auto tilde = monotonized(gauge_of(DomainProfile::power(1.0, 0.5), p, n));
  const auto hat = monotone_smooth_envelope(tilde.t, tilde.values, tilde.beta);
  for (std::size_t i = 0; i < tilde.t.size(); i += 11) {
    EXPECT_NEAR(hat.delta(tilde.t[i]), 1.5 * tilde.values[i], 1e-12 * tilde.values[i]);
  }
  EXPECT_TRUE(hat.monotone_flag);
  EXPECT_TRUE(hat.has_derivative());
  EXPECT_NEAR(hat.delta(-0.3), 1.5 * std::pow(0.3, 0.25), 1e-12);
}

TEST(Envelope, StaircaseStrictSandwich) {
  std::vector<double> t, d;
  const double beta = 0.25;
  for (int i = 0; i < 60; ++i) {
    t.push_back(-std::pow(0.8, i));
    const double step = 1.0 + std::floor(i / 10.0);
    d.push_back(std::pow(-t.back(), beta) * step);
  }
  const auto hat = monotone_smooth_envelope(t, d, beta);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_GT(hat.delta(t[i]), d[i]);
    EXPECT_LT(hat.delta(t[i]), 2.0 * d[i]);
  }
  EXPECT_TRUE(weighted_nondecreasing(hat, 1e-12));
  // C^1 derivative against differences between samples.
  for (double s : {-0.7, -0.05, -0.003}) {
    const double h = 1e-7 * std::abs(s);
    EXPECT_NEAR(hat.ddelta(s), (hat.delta(s + h) - hat.delta(s - h)) / (2 * h),
                1e-5 * std::abs(hat.ddelta(s)) + 1e-9);
  }
}

TEST(Envelope, RejectsNonMonotoneInput) {
  const std::vector<double> t{-1.0, -0.5, -0.25};
  const std::vector<double> d{1.0, 0.1, 1.0};
  EXPECT_THROW(monotone_smooth_envelope(t, d, 0.0), DomainError);
  EXPECT_THROW(monotone_smooth_envelope(t, std::vector<double>{1, 1, 1}, 0.0, 2.0), DomainError);
}

TEST(Envelope, PerturbedProfilesPipeline) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> q_dist(0.2, 0.8), e_dist(0.0, 0.3), w_dist(0.5, 4.0);
  for (int trial = 0; trial < 10; ++trial) {
    const auto prof = wiggly_power(q_dist(rng), e_dist(rng), w_dist(rng));
    const auto g = gauge_of(prof, 3.0, 1);
    const auto tilde = monotonized(g);
    EXPECT_TRUE(weighted_nondecreasing(tilde, 1e-14));
    const auto once = running_sup(g.weighted());
    EXPECT_TRUE(std::is_sorted(once.begin(), once.end()));
    const auto hat = monotone_smooth_envelope(tilde.t, tilde.values, tilde.beta);
    EXPECT_TRUE(weighted_nondecreasing(hat, 1e-12));
    for (std::size_t i = 0; i < tilde.t.size(); ++i) {
      EXPECT_GT(hat.delta(tilde.t[i]), tilde.values[i]);
      EXPECT_LT(hat.delta(tilde.t[i]), 2.0 * tilde.values[i]);
    }
  }
}

TEST(Scaling, Examples) {
  const auto base = DomainProfile::power(1.0, 0.5);
  auto [same, f1] = scale_domain(base, 1.0, 3.0);
  EXPECT_EQ(f1, 1.0);
  EXPECT_EQ(same.zeta(-0.3), base.zeta(-0.3));
  auto [twice, f2] = scale_domain(base, 2.0, 3.0);
  EXPECT_DOUBLE_EQ(f2, 0.125);
  EXPECT_DOUBLE_EQ(twice.zeta(-0.25), 1.0);
  EXPECT_DOUBLE_EQ(scale_domain(base, 2.0, 4.0).second, 0.25);
  EXPECT_THROW(scale_domain(base, 2.0, 2.0), DomainError);
  EXPECT_THROW(scale_domain(base, -1.0, 3.0), DomainError);
}
