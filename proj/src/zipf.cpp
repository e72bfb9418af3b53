#include "zipfkit/zipf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "zipfkit/error.hpp"
#include "zipfkit/random.hpp"

namespace zipfkit {

namespace {

constexpr std::size_t kNullReplicates = 20000;
constexpr std::uint64_t kNullSeed = 0x5a1f2000;

// Sorted simulated null LMZ values for a given tail size, built on first use.
const std::vector<double>& null_column(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) {
    auto values = lmz_null_sample(n, kNullReplicates, kNullSeed, Exec::serial);
    std::sort(values.begin(), values.end());
    it = cache.emplace(n, std::move(values)).first;
  }
  return it->second;
}

double column_pvalue(std::size_t n, double statistic) {
  const auto& col = null_column(n);
  const auto below = std::lower_bound(col.begin(), col.end(), statistic) - col.begin();
  return static_cast<double>(col.size() - static_cast<std::size_t>(below)) /
         static_cast<double>(col.size());
}

double upper_quantile(const std::vector<double>& sorted, double level) {
  const double h = static_cast<double>(sorted.size() - 1) * (1.0 - level);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::string_view to_string(CriticalSource s) {
  return s == CriticalSource::asymptotic_chi2 ? "asymptotic_chi2" : "monte_carlo_table";
}

double lr_statistic(double alpha_hat, std::size_t n) {
  const double gain = std::log(alpha_hat) + 1.0 / alpha_hat - 1.0;
  return std::max(0.0, 2.0 * static_cast<double>(n) * gain);
}

TestResult lr_zipf(const TailSample& tail, const TailFit& fit) {
  if (fit.x_min != tail.x_min()) throw Error("fit/sample mismatch");
  if (tail.tail_size() < 2) throw Error("insufficient tail");
  if (!(fit.alpha > 0.0) || !std::isfinite(fit.alpha)) throw Error("degenerate tail");
  const double lr = lr_statistic(fit.alpha, tail.tail_size());
  return {lr, std::erfc(std::sqrt(lr / 2.0))};
}

double lmz_statistic(std::span<const double> tail, double x_min) {
  if (tail.size() < 2) throw Error("insufficient tail");
  double log_sum = 0.0;
  double inv_sum = 0.0;
  for (double x : tail) {
    log_sum += std::log(x / x_min);
    inv_sum += x_min / x;
  }
  if (!(log_sum > 0.0)) throw Error("degenerate tail");
  const double n = static_cast<double>(tail.size());
  const double a1 = log_sum / n - 1.0;
  const double a2 = inv_sum / n - 0.5;
  return n * (4.0 * a1 * a1 + 24.0 * a1 * a2 + 48.0 * a2 * a2);
}

LmzResult lmz_pvalue(double statistic, std::size_t n) {
  if (n > kLmzTableMaxN) {
    return {statistic, std::exp(-statistic / 2.0), CriticalSource::asymptotic_chi2};
  }
  LmzResult out{statistic, 1.0, CriticalSource::monte_carlo_table};
  const auto* first = std::begin(kLmzTableSizes);
  const auto* last = std::end(kLmzTableSizes);
  if (n <= *first) {
    out.p_value = column_pvalue(n, statistic);
    return out;
  }
  const auto* hi = std::lower_bound(first, last, n);
  if (*hi == n) {
    out.p_value = column_pvalue(n, statistic);
    return out;
  }
  const auto* lo = hi - 1;
  const double w = static_cast<double>(n - *lo) / static_cast<double>(*hi - *lo);
  out.p_value = (1.0 - w) * column_pvalue(*lo, statistic) + w * column_pvalue(*hi, statistic);
  return out;
}

LmzResult lmz(const TailSample& tail) {
  return lmz_pvalue(lmz_statistic(tail.tail(), tail.x_min()), tail.tail_size());
}

ZipfReport zipf_tests(const TailSample& tail, const TailFit& fit) {
  const auto lr = lr_zipf(tail, fit);
  const auto lm = lmz(tail);
  ZipfReport r;
  r.lr = lr.statistic;
  r.lr_p = lr.p_value;
  r.lmz = lm.statistic;
  r.lmz_p = lm.p_value;
  r.tail_n = tail.tail_size();
  r.critical_source = lm.source;
  return r;
}

double chi2_2_critical(double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error("level must lie in (0, 1)");
  return -2.0 * std::log(level);
}

std::vector<double> lmz_null_sample(std::size_t n, std::size_t replicates,
                                    std::uint64_t seed, Exec exec) {
  if (n < 2) throw Error("insufficient tail");
  const std::uint64_t column_seed = derive_seed(seed, n);
  std::vector<double> out(replicates);
  for_each_index(replicates, exec, [&](std::size_t r) {
    Engine eng = make_engine(column_seed, r);
    std::vector<double> draw(n);
    for (double& x : draw) x = 1.0 / open_uniform(eng);
    out[r] = lmz_statistic(draw, 1.0);
  });
  return out;
}

std::vector<CriticalValue> lmz_critical_table(std::span<const std::size_t> sizes,
                                              std::span<const double> levels,
                                              std::size_t replicates,
                                              std::uint64_t seed, Exec exec) {
  if (replicates < 10000) throw Error("too few replicates (need at least 10000)");
  for (auto n : sizes) {
    if (n < 5) throw Error("table sizes must be at least 5");
  }
  for (double level : levels) {
    if (!(level > 0.0 && level < 1.0)) throw Error("level must lie in (0, 1)");
  }
  std::vector<CriticalValue> table;
  for (auto n : sizes) {
    auto values = lmz_null_sample(n, replicates, seed, exec);
    std::sort(values.begin(), values.end());
    for (double level : levels) table.push_back({n, level, upper_quantile(values, level)});
  }
  return table;
}

}  // namespace zipfkit
