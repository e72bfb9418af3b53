#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

#include "zipfkit/exec.hpp"
#include "zipfkit/tail.hpp"

namespace zipfkit {

enum class GofStatistic { ks_d, cvm_w2, ks_two_sample };

std::string_view to_string(GofStatistic s);
GofStatistic parse_gof_statistic(std::string_view text);  // "ks" | "cvm"

struct GofReport {
  GofStatistic statistic_name = GofStatistic::ks_d;
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t replicates = 0;  // 0 when the p-value is analytic or absent
};

// One-sample statistics of the tail against the fitted Pareto CDF. The
// p-value is left at 1 with zero replicates; use bootstrap_pvalue for one.
GofReport ks_one_sample(const TailSample& tail, const TailFit& fit);
GofReport cvm_w2(const TailSample& tail, const TailFit& fit);

// Statistic of an ascending tail against Pareto(alpha, x_min).
double tail_statistic(GofStatistic s, std::span<const double> sorted_tail,
                      double alpha, double x_min);

// Parametric bootstrap with refitting: each replicate draws fit.tail_n points
// from Pareto(fit.alpha, fit.x_min), refits alpha at the same x_min and
// recomputes the statistic. p = (1 + #{replicate >= observed}) / (R + 1).
GofReport bootstrap_pvalue(const TailSample& tail, const TailFit& fit,
                           GofStatistic statistic, std::size_t replicates,
                           std::uint64_t seed, Exec exec = Exec::parallel);
GofReport bootstrap_pvalue(double observed, const TailFit& fit,
                           GofStatistic statistic, std::size_t replicates,
                           std::uint64_t seed, Exec exec = Exec::parallel);

// Asymptotic Kolmogorov survival function 2 sum (-1)^(k-1) exp(-2 k^2 l^2).
double kolmogorov_survival(double lambda);

// Two-sample KS with the Stephens small-sample correction on the effective
// size nm/(n+m).
GofReport ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace zipfkit
