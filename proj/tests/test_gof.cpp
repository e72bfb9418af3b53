#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "test_support.hpp"
#include "zipfkit/error.hpp"
#include "zipfkit/gof.hpp"
#include "zipfkit/tail.hpp"

namespace zipfkit {
namespace {

using testing::lognormal_sample;
using testing::pareto_sample;

// n * integral (F_n - F)^2 dF, integrated exactly on each step in u = F(x).
double cvm_by_integration(std::vector<double> sorted, double alpha, double x_min) {
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> u = {0.0};
  for (double x : sorted) u.push_back(1.0 - std::pow(x_min / x, alpha));
  u.push_back(1.0);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < u.size(); ++i) {
    const double level = static_cast<double>(i) / n;
    const double a = u[i] - level;
    const double b = u[i + 1] - level;
    total += (b * b * b - a * a * a) / 3.0;
  }
  return n * total;
}

TEST(KsOneSample, SinglePointAtMedian) {
  const double x = 2.0;  // F(2) = 0.5 for alpha = 1, x_min = 1
  const std::vector<double> tail = {x};
  EXPECT_DOUBLE_EQ(tail_statistic(GofStatistic::ks_d, tail, 1.0, 1.0), 0.5);
}

TEST(KsOneSample, QuantilePlacementGivesHalfStep) {
  const std::size_t n = 10;
  std::vector<double> tail;
  for (std::size_t i = 1; i <= n; ++i) {
    tail.push_back(pareto_quantile((static_cast<double>(i) - 0.5) / n, 1.3, 2.0));
  }
  EXPECT_NEAR(tail_statistic(GofStatistic::ks_d, tail, 1.3, 2.0), 0.05, 1e-12);
}

TEST(KsOneSample, FittedParetoBelowScaledCritical) {
  int below = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TailSample s(pareto_sample(1000, 1.0, 1.0, 500 + seed), 1.0);
    const auto fit = fit_alpha_mle(s);
    const auto r = ks_one_sample(s, fit);
    EXPECT_EQ(r.statistic_name, GofStatistic::ks_d);
    EXPECT_EQ(r.replicates, 0u);
    EXPECT_EQ(r.p_value, 1.0);
    below += r.statistic < 1.36 / std::sqrt(1000.0) * 1.5;
  }
  EXPECT_GE(below, 95);
}

TEST(CvmW2, SinglePointAtMedian) {
  const std::vector<double> tail = {2.0};
  EXPECT_NEAR(tail_statistic(GofStatistic::cvm_w2, tail, 1.0, 1.0), 1.0 / 12.0, 1e-15);
}

TEST(CvmW2, TwoPointsOnPlottingPositions) {
  const std::vector<double> tail = {pareto_quantile(0.25, 1.0, 1.0),
                                    pareto_quantile(0.75, 1.0, 1.0)};
  EXPECT_NEAR(tail_statistic(GofStatistic::cvm_w2, tail, 1.0, 1.0), 1.0 / 24.0, 1e-15);
}

TEST(CvmW2, MatchesPiecewiseIntegral) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const std::size_t n = 20 + 7 * seed;
    const auto v = pareto_sample(n, 1.4, 3.0, 900 + seed);
    const TailSample s(v, 3.0);
    const auto fit = fit_alpha_mle(s);
    const double w2 = cvm_w2(s, fit).statistic;
    EXPECT_NEAR(w2, cvm_by_integration(v, fit.alpha, 3.0), 1e-12) << seed;
  }
}

TEST(OneSample, ThresholdMismatchRejected) {
  const TailSample s(pareto_sample(100, 1.0, 1.0, 1), 1.0);
  auto fit = fit_alpha_mle(s);
  fit.x_min = 1.5;
  try {
    cvm_w2(s, fit);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "fit/sample mismatch");
  }
  EXPECT_THROW(ks_one_sample(s, fit), Error);
}

TEST(OneSample, InvariantUnderRescaling) {
  const auto v = pareto_sample(300, 1.1, 2.0, 77);
  const TailSample s(v, 2.0);
  const auto fit = fit_alpha_mle(s);
  std::vector<double> scaled(v);
  for (auto& x : scaled) x *= 37.5;
  const TailSample s2(scaled, 75.0);
  const auto fit2 = fit_alpha_mle(s2);
  EXPECT_NEAR(ks_one_sample(s, fit).statistic, ks_one_sample(s2, fit2).statistic, 1e-12);
  EXPECT_NEAR(cvm_w2(s, fit).statistic, cvm_w2(s2, fit2).statistic, 1e-12);
}

TEST(Bootstrap, ZeroObservedGivesPValueOne) {
  TailFit fit;
  fit.alpha = 1.0;
  fit.x_min = 1.0;
  fit.tail_n = 50;
  const auto r = bootstrap_pvalue(0.0, fit, GofStatistic::cvm_w2, 200, 3);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.replicates, 200u);
}

TEST(Bootstrap, TooFewReplicates) {
  const TailSample s(pareto_sample(100, 1.0, 1.0, 1), 1.0);
  const auto fit = fit_alpha_mle(s);
  try {
    bootstrap_pvalue(s, fit, GofStatistic::ks_d, 99, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "too few replicates");
  }
}

TEST(Bootstrap, PValueOnReplicateGrid) {
  const TailSample s(pareto_sample(100, 1.0, 1.0, 4), 1.0);
  const auto fit = fit_alpha_mle(s);
  const auto r = bootstrap_pvalue(s, fit, GofStatistic::ks_d, 250, 9);
  const double k = r.p_value * 251.0 - 1.0;
  EXPECT_NEAR(k, std::round(k), 1e-9);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LE(r.p_value, 1.0);
}

TEST(Bootstrap, SizeUnderPareto) {
  int accepted = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const TailSample s(pareto_sample(200, 1.0, 1.0, 3000 + seed), 1.0);
    const auto fit = fit_alpha_mle(s);
    accepted += bootstrap_pvalue(s, fit, GofStatistic::cvm_w2, 1000, seed).p_value > 0.05;
  }
  EXPECT_GE(accepted, 90);
}

TEST(Bootstrap, PowerAgainstLognormal) {
  int rejected = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v = lognormal_sample(943, 0.0, 1.0, seed);
    const TailSample s(v, *std::min_element(v.begin(), v.end()));
    const auto fit = fit_alpha_mle(s);
    rejected += bootstrap_pvalue(s, fit, GofStatistic::cvm_w2, 200, seed).p_value < 0.05;
  }
  EXPECT_GE(rejected, 18);
}

TEST(Kolmogorov, KnownValues) {
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.0494, 5e-4);
  EXPECT_NEAR(kolmogorov_survival(1.224), 0.10, 1e-3);
  EXPECT_LT(kolmogorov_survival(3.0), 1e-7);
}

TEST(KsTwoSample, IdenticalSamples) {
  const auto a = pareto_sample(500, 1.0, 1.0, 5);
  const auto r = ks_two_sample(a, a);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.statistic_name, GofStatistic::ks_two_sample);
}

TEST(KsTwoSample, DisjointSupports) {
  const std::vector<double> a = {1, 2};
  const std::vector<double> b = {3, 4};
  EXPECT_EQ(ks_two_sample(a, b).statistic, 1.0);
}

TEST(KsTwoSample, Symmetric) {
  const auto a = pareto_sample(300, 1.0, 1.0, 8);
  const auto b = pareto_sample(450, 1.2, 1.0, 9);
  const auto ab = ks_two_sample(a, b);
  const auto ba = ks_two_sample(b, a);
  EXPECT_EQ(ab.statistic, ba.statistic);
  EXPECT_EQ(ab.p_value, ba.p_value);
}

TEST(KsTwoSample, EmptyRejected) {
  try {
    ks_two_sample(std::vector<double>{}, std::vector<double>{1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "empty sample");
  }
}

TEST(KsTwoSample, LargeSamplesFromSameLaw) {
  const std::size_t n = 47161;
  int small_d = 0;
  int large_p = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto a = pareto_sample(n, 1.0, 133.4, 2 * seed + 10000);
    const auto b = pareto_sample(n, 1.0, 133.4, 2 * seed + 10001);
    const auto r = ks_two_sample(a, b);
    small_d += r.statistic < 0.012;
    large_p += r.p_value > 0.10;
  }
  EXPECT_GE(small_d, 90);
  EXPECT_GE(large_p, 90);
}

TEST(GofStatistic, Names) {
  EXPECT_EQ(to_string(GofStatistic::ks_d), "KS_D");
  EXPECT_EQ(to_string(GofStatistic::cvm_w2), "CvM_W2");
  EXPECT_EQ(to_string(GofStatistic::ks_two_sample), "KS_two_sample");
  EXPECT_EQ(parse_gof_statistic("cvm"), GofStatistic::cvm_w2);
  EXPECT_THROW(parse_gof_statistic("ad"), Error);
}

}  // namespace
}  // namespace zipfkit
