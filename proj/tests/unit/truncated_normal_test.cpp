#include "qaoace/truncated_normal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "qaoace/errors.hpp"

namespace qaoace {
namespace {

// Reference: CDF of the truncated distribution from std::erfc, inverted by
// bisection. Uses upper-tail probabilities so it stays accurate out to
// roughly 30 standard deviations.
double reference_quantile(double mean, double var, double lo, double hi, double u) {
  const double sd = std::sqrt(var);
  auto tail = [&](double x) { return 0.5 * std::erfc((x - mean) / (sd * std::sqrt(2.0))); };
  const double t_lo = tail(lo), t_hi = tail(hi);
  double left = lo, right = hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (left + right);
    const double cdf = (t_lo - tail(mid)) / (t_lo - t_hi);
    (cdf < u ? left : right) = mid;
  }
  return 0.5 * (left + right);
}

TEST(TruncatedNormalTest, MatchesReferenceQuantile) {
  struct Case {
    double mean, var, lo, hi;
  };
  const std::vector<Case> cases{
      {0.0, 1.0, 0.1, 10.0},  {5.0, 1.0, 0.1, 10.0}, {0.0, 1.0, 2.1, 12.0},
      {3.0, 0.1, 0.1, 10.0},  {12.0, 2.0, 0.1, 10.0}, {0.0, 1.0, 20.1, 30.0},
      {-4.0, 0.5, -1.0, 1.0}, {1.0, 4.0, -2.0, 2.0},
  };
  for (const auto& c : cases) {
    for (double u : {0.001, 0.1, 0.25, 0.5, 0.75, 0.9, 0.999}) {
      const double expected = reference_quantile(c.mean, c.var, c.lo, c.hi, u);
      const double got = truncated_normal_quantile(c.mean, c.var, c.lo, c.hi, u);
      EXPECT_NEAR(got, expected, 1e-7 * std::max(1.0, std::abs(expected)))
          << "mean " << c.mean << " var " << c.var << " [" << c.lo << "," << c.hi << "] u " << u;
    }
  }
}

TEST(TruncatedNormalTest, TableSettingsMedian) {
  // mean 0, variance 1 on [0.1, 10]: reference median is about 0.739.
  const double median = reference_quantile(0.0, 1.0, 0.1, 10.0, 0.5);
  EXPECT_GT(median, 0.1);
  EXPECT_LT(median, 1.0);

  Rng rng(42);
  std::vector<double> draws(10000);
  for (auto& x : draws) x = sample_truncated_normal(0.0, 1.0, 0.1, 10.0, rng);
  std::nth_element(draws.begin(), draws.begin() + 5000, draws.end());
  const double empirical = draws[5000];
  EXPECT_GE(empirical, 0.1);
  EXPECT_LE(empirical, 1.0);
  EXPECT_NEAR(empirical, median, 0.03);
}

TEST(TruncatedNormalTest, DrawsStayInRange) {
  Rng rng(1);
  for (int trial = 0; trial < 10000; ++trial) {
    const double lo = 20 * uniform01(rng) - 10;
    const double hi = lo + 1e-3 + 15 * uniform01(rng);
    const double mean = 60 * uniform01(rng) - 30;
    const double var = std::pow(10.0, 6 * uniform01(rng) - 4);
    const double x = sample_truncated_normal(mean, var, lo, hi, rng);
    ASSERT_GE(x, lo);
    ASSERT_LE(x, hi);
    ASSERT_TRUE(std::isfinite(x));
  }
}

TEST(TruncatedNormalTest, DegenerateVarianceCollapsesToMean) {
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_NEAR(sample_truncated_normal(5.05, 1e-8, 0.1, 10.0, rng), 5.05, 1e-3);
  }
}

TEST(TruncatedNormalTest, FarTailBeyondDoubleRange) {
  // Q(40) underflows; the draw must still sit just above the lower bound.
  Rng rng(3);
  std::vector<double> draws(2001);
  for (auto& x : draws) {
    x = sample_truncated_normal(0.0, 1.0, 40.0, 50.0, rng);
    ASSERT_GE(x, 40.0);
    ASSERT_LE(x, 50.0);
  }
  std::nth_element(draws.begin(), draws.begin() + 1000, draws.end());
  // Excess over the bound is close to Exp(40): median ln(2)/40.
  EXPECT_NEAR(draws[1000] - 40.0, std::log(2.0) / 40.0, 0.005);

  // Mirror image in the lower tail.
  for (int i = 0; i < 100; ++i) {
    const double x = sample_truncated_normal(0.0, 1.0, -50.0, -40.0, rng);
    ASSERT_LE(x, -40.0);
    ASSERT_GT(x, -40.5);
  }
}

TEST(TruncatedNormalTest, DeterministicPerSeed) {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_truncated_normal(1.0, 2.0, 0.1, 10.0, a),
              sample_truncated_normal(1.0, 2.0, 0.1, 10.0, b));
  }
}

TEST(TruncatedNormalTest, RejectsBadArguments) {
  Rng rng(0);
  EXPECT_THROW(sample_truncated_normal(0.0, 1.0, 1.0, 1.0, rng), InvalidArgument);
  EXPECT_THROW(sample_truncated_normal(0.0, 1.0, 2.0, 1.0, rng), InvalidArgument);
  EXPECT_THROW(sample_truncated_normal(0.0, 0.0, 0.0, 1.0, rng), InvalidArgument);
  EXPECT_THROW(sample_truncated_normal(0.0, -1.0, 0.0, 1.0, rng), InvalidArgument);
}

}  // namespace
}  // namespace qaoace
