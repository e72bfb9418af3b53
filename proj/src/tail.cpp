#include "zipfkit/tail.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "zipfkit/edf.hpp"
#include "zipfkit/error.hpp"

namespace zipfkit {

namespace {

void check_positive(std::span<const double> values) {
  if (values.empty()) throw Error("empty sample");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) throw Error("non-positive value");
  }
}

std::vector<double> sorted_copy(std::span<const double> values) {
  std::vector<double> out(values.begin(), values.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::string shortest(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  double out = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error("invalid number '" + std::string(text) + "'");
  }
  return out;
}

double select_by_fraction(const std::vector<double>& sorted, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error("tail fraction must lie in (0, 1)");
  }
  const auto n = sorted.size();
  // Guard against products such as 0.07 * 100 landing a hair above an integer.
  const auto k = static_cast<std::size_t>(
      std::ceil(fraction * static_cast<double>(n) - 1e-9));
  if (k < 2) throw Error("insufficient tail");
  return sorted[n - k];
}

double select_by_ks_scan(const std::vector<double>& sorted, std::size_t min_tail,
                         Exec exec) {
  const auto n = sorted.size();
  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < n; ++j) {
    if ((j == 0 || sorted[j] != sorted[j - 1]) && n - j >= min_tail) {
      candidates.push_back(j);
    }
  }
  std::size_t n_distinct = 1;
  for (std::size_t j = 1; j < n; ++j) n_distinct += sorted[j] != sorted[j - 1];
  if (n_distinct < 10) throw Error("too few distinct values for ks-scan");
  if (candidates.empty() || min_tail < 2) throw Error("insufficient tail");

  std::vector<double> suffix_log(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) suffix_log[j] = suffix_log[j + 1] + std::log(sorted[j]);

  const std::span<const double> all(sorted);
  std::vector<double> distance(candidates.size(),
                               std::numeric_limits<double>::infinity());
  for_each_index(candidates.size(), exec, [&](std::size_t c) {
    const std::size_t j = candidates[c];
    const double x_min = sorted[j];
    const auto m = static_cast<double>(n - j);
    const double log_sum = suffix_log[j] - m * std::log(x_min);
    if (!(log_sum > 0.0)) return;
    const double alpha = m / log_sum;
    distance[c] = ks_distance(all.subspan(j), [&](double x) {
      return pareto_cdf(x, alpha, x_min);
    });
  });

  std::size_t best = 0;
  for (std::size_t c = 1; c < candidates.size(); ++c) {
    if (distance[c] < distance[best]) best = c;
  }
  if (!std::isfinite(distance[best])) throw Error("degenerate tail");
  return sorted[candidates[best]];
}

}  // namespace

std::vector<CcdfPoint> ccdf(std::span<const double> values) {
  check_positive(values);
  const auto sorted = sorted_copy(values);
  const auto n = static_cast<double>(sorted.size());
  std::vector<CcdfPoint> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    // i is the last index holding this value; everything after it is greater.
    out.push_back({sorted[i], static_cast<double>(sorted.size() - i - 1) / n});
  }
  return out;
}

TailSample::TailSample(std::vector<double> values, double x_min)
    : values_(std::move(values)), x_min_(x_min), tail_begin_(0) {
  check_positive(values_);
  if (!(x_min > 0.0) || !std::isfinite(x_min)) throw Error("non-positive threshold");
  std::sort(values_.begin(), values_.end());
  tail_begin_ = static_cast<std::size_t>(
      std::lower_bound(values_.begin(), values_.end(), x_min) - values_.begin());
  if (tail_begin_ == values_.size()) throw Error("insufficient tail");
}

double alpha_mle(std::span<const double> tail, double x_min) {
  if (tail.empty()) throw Error("insufficient tail");
  double log_sum = 0.0;
  for (double x : tail) log_sum += std::log(x / x_min);
  if (!(log_sum > 0.0)) throw Error("degenerate tail");
  return static_cast<double>(tail.size()) / log_sum;
}

TailFit fit_alpha_mle(const TailSample& sample) {
  const auto tail = sample.tail();
  if (tail.size() < 2) throw Error("insufficient tail");
  TailFit fit;
  fit.alpha = alpha_mle(tail, sample.x_min());
  fit.x_min = sample.x_min();
  fit.tail_n = tail.size();
  fit.std_err = fit.alpha / std::sqrt(static_cast<double>(tail.size()));
  fit.tail_fraction =
      static_cast<double>(tail.size()) / static_cast<double>(sample.size());
  return fit;
}

double pareto_cdf(double x, double alpha, double x_min) {
  if (x <= x_min) return 0.0;
  return 1.0 - std::pow(x_min / x, alpha);
}

double pareto_quantile(double p, double alpha, double x_min) {
  return x_min * std::pow(1.0 - p, -1.0 / alpha);
}

XminPolicy parse_xmin_policy(std::string_view text) {
  if (text == "ks-scan") return KsScanXmin{};
  if (text.starts_with("fixed:")) {
    const double x = parse_double(text.substr(6));
    if (!(x > 0.0)) throw Error("fixed x_min must be positive");
    return FixedXmin{x};
  }
  if (text.starts_with("frac:")) {
    const double f = parse_double(text.substr(5));
    if (!(f > 0.0 && f < 1.0)) throw Error("tail fraction must lie in (0, 1)");
    return TailFractionXmin{f};
  }
  throw Error("unknown x_min policy '" + std::string(text) +
              "' (expected fixed:<x>, frac:<f> or ks-scan)");
}

std::string to_string(const XminPolicy& policy) {
  if (const auto* f = std::get_if<FixedXmin>(&policy)) return "fixed:" + shortest(f->x);
  if (const auto* t = std::get_if<TailFractionXmin>(&policy)) {
    return "frac:" + shortest(t->fraction);
  }
  return "ks-scan";
}

double select_xmin(std::span<const double> values, const XminPolicy& policy,
                   Exec exec) {
  check_positive(values);
  const auto sorted = sorted_copy(values);
  if (const auto* f = std::get_if<FixedXmin>(&policy)) {
    const auto at_or_above = static_cast<std::size_t>(
        sorted.end() - std::lower_bound(sorted.begin(), sorted.end(), f->x));
    if (at_or_above < 2) throw Error("insufficient tail");
    return f->x;
  }
  if (const auto* t = std::get_if<TailFractionXmin>(&policy)) {
    return select_by_fraction(sorted, t->fraction);
  }
  return select_by_ks_scan(sorted, std::get<KsScanXmin>(policy).min_tail, exec);
}

}  // namespace zipfkit
