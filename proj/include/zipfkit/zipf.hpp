#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "zipfkit/exec.hpp"
#include "zipfkit/tail.hpp"

namespace zipfkit {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

enum class CriticalSource { asymptotic_chi2, monte_carlo_table };
std::string_view to_string(CriticalSource s);

// 2n [ln a + 1/a - 1]: twice the Pareto log-likelihood gain of a over 1.
double lr_statistic(double alpha_hat, std::size_t n);

// Likelihood ratio test of alpha = 1, chi-squared(1) upper tail.
TestResult lr_zipf(const TailSample& tail, const TailFit& fit);

// Urzua's Lagrange multiplier statistic for Zipf's law. With
// a1 = mean ln(x/x_min) - 1 and a2 = mean(x_min/x) - 1/2,
//   LMZ = n (4 a1^2 + 24 a1 a2 + 48 a2^2),
// the score test of alpha = 1 against a Pareto density with an additional
// exp(-b/x) factor. Asymptotically chi-squared(2).
double lmz_statistic(std::span<const double> tail, double x_min);

struct LmzResult {
  double statistic = 0.0;
  double p_value = 1.0;
  CriticalSource source = CriticalSource::asymptotic_chi2;
};

// Tails of at most 200 points take their p-value from simulated null
// distributions at the tabulated sizes, interpolated linearly in n; larger
// tails use chi-squared(2).
LmzResult lmz(const TailSample& tail);
LmzResult lmz_pvalue(double statistic, std::size_t n);

inline constexpr std::size_t kLmzTableMaxN = 200;
inline constexpr std::size_t kLmzTableSizes[] = {10, 15, 20, 25, 30, 50, 100, 200};

struct ZipfReport {
  double lr = 0.0;
  double lr_p = 1.0;
  double lmz = 0.0;
  double lmz_p = 1.0;
  std::size_t tail_n = 0;
  CriticalSource critical_source = CriticalSource::asymptotic_chi2;
};

ZipfReport zipf_tests(const TailSample& tail, const TailFit& fit);

// Upper chi-squared(2) quantile, the n -> infinity column of the table.
double chi2_2_critical(double level);

// LMZ values of `replicates` Zipf samples (x = u^-1, x_min = 1) of size n.
// Replicate r of size n depends only on (seed, n, r).
std::vector<double> lmz_null_sample(std::size_t n, std::size_t replicates,
                                    std::uint64_t seed, Exec exec = Exec::parallel);

struct CriticalValue {
  std::size_t n = 0;
  double level = 0.0;
  double value = 0.0;
};

// Empirical upper quantiles of LMZ under Zipf's law, one row per
// (size, level) in input order.
std::vector<CriticalValue> lmz_critical_table(std::span<const std::size_t> sizes,
                                              std::span<const double> levels,
                                              std::size_t replicates,
                                              std::uint64_t seed,
                                              Exec exec = Exec::parallel);

}  // namespace zipfkit
