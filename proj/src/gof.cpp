#include "zipfkit/gof.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "zipfkit/edf.hpp"
#include "zipfkit/error.hpp"
#include "zipfkit/random.hpp"

namespace zipfkit {

namespace {

void check_matching(const TailSample& tail, const TailFit& fit) {
  if (fit.x_min != tail.x_min()) throw Error("fit/sample mismatch");
}

std::vector<double> sorted_copy(std::span<const double> v) {
  std::vector<double> out(v.begin(), v.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view to_string(GofStatistic s) {
  switch (s) {
    case GofStatistic::ks_d: return "KS_D";
    case GofStatistic::cvm_w2: return "CvM_W2";
    case GofStatistic::ks_two_sample: return "KS_two_sample";
  }
  return "unknown";
}

GofStatistic parse_gof_statistic(std::string_view text) {
  if (text == "ks") return GofStatistic::ks_d;
  if (text == "cvm") return GofStatistic::cvm_w2;
  throw Error("unknown statistic '" + std::string(text) + "' (expected ks or cvm)");
}

double tail_statistic(GofStatistic s, std::span<const double> sorted_tail,
                      double alpha, double x_min) {
  auto cdf = [alpha, x_min](double x) { return pareto_cdf(x, alpha, x_min); };
  switch (s) {
    case GofStatistic::ks_d: return ks_distance(sorted_tail, cdf);
    case GofStatistic::cvm_w2: return cvm_distance(sorted_tail, cdf);
    case GofStatistic::ks_two_sample: break;
  }
  throw Error("statistic is not a one-sample tail statistic");
}

GofReport ks_one_sample(const TailSample& tail, const TailFit& fit) {
  check_matching(tail, fit);
  return {GofStatistic::ks_d,
          tail_statistic(GofStatistic::ks_d, tail.tail(), fit.alpha, fit.x_min),
          1.0, 0};
}

GofReport cvm_w2(const TailSample& tail, const TailFit& fit) {
  check_matching(tail, fit);
  return {GofStatistic::cvm_w2,
          tail_statistic(GofStatistic::cvm_w2, tail.tail(), fit.alpha, fit.x_min),
          1.0, 0};
}

GofReport bootstrap_pvalue(const TailSample& tail, const TailFit& fit,
                           GofStatistic statistic, std::size_t replicates,
                           std::uint64_t seed, Exec exec) {
  check_matching(tail, fit);
  const double observed = tail_statistic(statistic, tail.tail(), fit.alpha, fit.x_min);
  return bootstrap_pvalue(observed, fit, statistic, replicates, seed, exec);
}

GofReport bootstrap_pvalue(double observed, const TailFit& fit,
                           GofStatistic statistic, std::size_t replicates,
                           std::uint64_t seed, Exec exec) {
  if (replicates < 100) throw Error("too few replicates");
  if (statistic == GofStatistic::ks_two_sample) {
    throw Error("bootstrap supports KS_D and CvM_W2 only");
  }
  if (!(fit.alpha > 0.0) || !(fit.x_min > 0.0) || fit.tail_n < 2) {
    throw Error("invalid fit");
  }

  std::vector<double> simulated(replicates);
  for_each_index(replicates, exec, [&](std::size_t r) {
    Engine eng = make_engine(seed, r);
    std::vector<double> draw(fit.tail_n);
    for (double& x : draw) x = pareto_draw(eng, fit.alpha, fit.x_min);
    std::sort(draw.begin(), draw.end());
    // Draws are strictly above x_min, so the log sum is positive.
    const double alpha = alpha_mle(draw, fit.x_min);
    simulated[r] = tail_statistic(statistic, draw, alpha, fit.x_min);
  });

  const auto exceed = std::count_if(simulated.begin(), simulated.end(),
                                    [observed](double s) { return s >= observed; });
  GofReport report;
  report.statistic_name = statistic;
  report.statistic = observed;
  report.replicates = replicates;
  report.p_value = (1.0 + static_cast<double>(exceed)) /
                   (static_cast<double>(replicates) + 1.0);
  return report;
}

double kolmogorov_survival(double lambda) {
  // Below 0.2 the survival function differs from 1 by less than 1e-12 while
  // the alternating series converges slowly.
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 1000; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-10) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

GofReport ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error("empty sample");
  const auto sa = sorted_copy(a);
  const auto sb = sorted_copy(b);
  const double n = static_cast<double>(sa.size());
  const double m = static_cast<double>(sb.size());

  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < sa.size() && j < sb.size()) {
    const double x = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] == x) ++i;
    while (j < sb.size() && sb[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }

  const double en = std::sqrt(n * m / (n + m));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  return {GofStatistic::ks_two_sample, d, kolmogorov_survival(lambda), 0};
}

}  // namespace zipfkit
