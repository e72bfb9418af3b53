#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "zipfkit/exec.hpp"

namespace zipfkit {

struct CcdfPoint {
  double x;
  double prob;  // Pr(X > x)
};

// Empirical complementary CDF at every distinct value, ascending in x.
std::vector<CcdfPoint> ccdf(std::span<const double> values);

// A positive sample together with a tail threshold. The tail is every value
// at or above x_min and is never empty.
class TailSample {
 public:
  TailSample(std::vector<double> values, double x_min);

  std::span<const double> values() const { return values_; }
  std::span<const double> tail() const {
    return std::span<const double>(values_).subspan(tail_begin_);
  }
  double x_min() const { return x_min_; }
  std::size_t size() const { return values_.size(); }
  std::size_t tail_size() const { return values_.size() - tail_begin_; }

 private:
  std::vector<double> values_;
  double x_min_;
  std::size_t tail_begin_;
};

struct TailFit {
  double alpha = 0.0;
  double x_min = 0.0;
  std::size_t tail_n = 0;
  double std_err = 0.0;
  double tail_fraction = 0.0;
};

// n / sum ln(x_i / x_min). Requires a non-empty tail with a non-zero log sum;
// does not enforce the n >= 2 rule of fit_alpha_mle.
double alpha_mle(std::span<const double> tail, double x_min);

TailFit fit_alpha_mle(const TailSample& sample);

double pareto_cdf(double x, double alpha, double x_min);
double pareto_quantile(double p, double alpha, double x_min);

struct FixedXmin {
  double x;
};
struct TailFractionXmin {
  double fraction = 0.02;
};
struct KsScanXmin {
  std::size_t min_tail = 10;
};
using XminPolicy = std::variant<FixedXmin, TailFractionXmin, KsScanXmin>;

// Accepts "fixed:<x>", "frac:<f>" and "ks-scan".
XminPolicy parse_xmin_policy(std::string_view text);
std::string to_string(const XminPolicy& policy);

double select_xmin(std::span<const double> values, const XminPolicy& policy,
                   Exec exec = Exec::parallel);

}  // namespace zipfkit
