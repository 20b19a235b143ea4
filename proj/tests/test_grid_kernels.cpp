#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "petrocheck/grid_kernels.hpp"
#include "petrocheck/params.hpp"

using namespace petrocheck;

TEST(GridKernels, InteriorGridShape) {
  const auto g = interior_grid(-1.0, 16, 8, 1e-4);
  ASSERT_EQ(g.t.size(), 16u);
  ASSERT_EQ(g.y.size(), 8u);
  EXPECT_NEAR(g.t.back(), -1e-4, 1e-18);
  EXPECT_GT(g.t.front(), -1.0);
  for (std::size_t i = 1; i < g.t.size(); ++i) EXPECT_GT(g.t[i], g.t[i - 1]);
  EXPECT_GT(g.y.front(), 0.0);
  EXPECT_LT(g.y.back(), 1.0);
}

TEST(GridKernels, SerialAndParallelAgreeBitwise) {
  const auto g = interior_grid(-1.0, 64, 64, 1e-4);
  const auto prof = DomainProfile::power(1.0, 0.4);
  const auto f = [](double r, double t) { return std::sin(31.0 * r) * std::exp(t) - r * t; };
  std::vector<double> a(g.size()), b(g.size());
  evaluate_on_grid(g, prof, f, a, Exec::serial);
  evaluate_on_grid(g, prof, f, b, Exec::parallel);
  EXPECT_EQ(a, b);
  EXPECT_EQ(fold_min(a).index, fold_min(b).index);
  EXPECT_EQ(fold_max(a).value, fold_max(b).value);
}

TEST(GridKernels, FoldTiesAndNaN) {
  const std::vector<double> v{2.0, 1.0, 1.0, 3.0, 3.0};
  EXPECT_EQ(fold_min(v).index, 1u);
  EXPECT_EQ(fold_max(v).index, 3u);
  const std::vector<double> w{2.0, std::nan(""), 1.0};
  EXPECT_EQ(fold_min(w).index, 1u);
  EXPECT_EQ(fold_max(w).index, 1u);
}

TEST(GridKernels, ForEachIndexRethrowsLowestIndex) {
  std::vector<int> hit(50, 0);
  try {
    for_each_index(50, [&](std::size_t i) {
      hit[i] = 1;
      if (i == 30 || i == 12) throw std::runtime_error("fail " + std::to_string(i));
    });
    FAIL() << "expected an exception";
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "fail 12");
  }
  for (int h : hit) EXPECT_EQ(h, 1);
}

TEST(GridKernels, SizeMismatchRejected) {
  const auto g = interior_grid(-1.0, 4, 4, 1e-2);
  std::vector<double> out(3);
  EXPECT_THROW(evaluate_on_grid(g, DomainProfile::power(1.0, 0.5), [](double, double) { return 0.0; },
                                out),
               DomainError);
}
