#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "zipfkit/exec.hpp"

namespace zipfkit {

// Fundamentals X = x0 * Z_0 * ... * Z_{N-1} with N ~ Geometric(p) on
// {1, 2, ...} and ln Z ~ Normal(log_z_mean, log_z_sd^2).
struct ReedConfig {
  double p = 0.01;
  double x0 = 1.0;
  double log_z_mean = -0.5;
  double log_z_sd = 1.0;
  std::size_t n_firms = 1000;
  std::uint64_t seed = 0;

  double q() const { return 1.0 - p; }
  double lambda() const { return p / (1.0 - p); }
  void validate() const;
};

struct Firm {
  std::size_t factors = 0;  // N
  double log_value = 0.0;   // ln X, always finite
  double value = 0.0;       // X, may underflow to 0 for long chains
};

// Firms are generated in fixed-size blocks, each with its own derived
// stream, so output depends only on the config.
std::vector<Firm> simulate_firms(const ReedConfig& config, Exec exec = Exec::parallel);
// Throws if any X leaves the double range; small p with negative drift can
// push ln X below -745. simulate_log has no such limit.
std::vector<double> simulate(const ReedConfig& config, Exec exec = Exec::parallel);
std::vector<double> simulate_log(const ReedConfig& config, Exec exec = Exec::parallel);

struct TailExponents {
  double alpha = 0.0;  // upper tail: Pr(X > x) ~ x^-alpha
  double beta = 0.0;   // lower tail exponent
};

// Roots of M_U(s) = 1/q for normal U: sd^2 s^2 / 2 + mean s + ln q = 0.
TailExponents analytic_tail_exponent(const ReedConfig& config);

// p s / (1 - q s), defined for |s| < 1/q.
double geometric_pgf(const ReedConfig& config, double s);

}  // namespace zipfkit
