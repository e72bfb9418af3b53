#include "zipfkit/reedsim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "zipfkit/error.hpp"
#include "zipfkit/random.hpp"

namespace zipfkit {

namespace {

constexpr std::size_t kBlock = 4096;

}  // namespace

void ReedConfig::validate() const {
  if (!(p > 0.0 && p < 1.0)) throw Error("p must lie in (0, 1)");
  if (!(x0 > 0.0) || !std::isfinite(x0)) throw Error("x0 must be positive");
  if (!std::isfinite(log_z_mean)) throw Error("log_z_mean must be finite");
  if (!(log_z_sd > 0.0) || !std::isfinite(log_z_sd)) throw Error("log_z_sd must be positive");
  if (n_firms < 1) throw Error("n_firms must be at least 1");
}

std::vector<Firm> simulate_firms(const ReedConfig& config, Exec exec) {
  config.validate();
  const double log_q = std::log(config.q());
  std::vector<Firm> firms(config.n_firms);
  const std::size_t blocks = (config.n_firms + kBlock - 1) / kBlock;
  for_each_index(blocks, exec, [&](std::size_t block) {
    Engine eng = make_engine(config.seed, block);
    std::normal_distribution<double> log_factor(config.log_z_mean, config.log_z_sd);
    const std::size_t end = std::min(config.n_firms, (block + 1) * kBlock);
    for (std::size_t i = block * kBlock; i < end; ++i) {
      const double count = std::ceil(std::log(open_uniform(eng)) / log_q);
      const auto n = static_cast<std::size_t>(std::max(1.0, count));
      double log_product = 0.0;
      for (std::size_t k = 0; k < n; ++k) log_product += log_factor(eng);
      firms[i] = {n, std::log(config.x0) + log_product, config.x0 * std::exp(log_product)};
    }
  });
  return firms;
}

std::vector<double> simulate(const ReedConfig& config, Exec exec) {
  const auto firms = simulate_firms(config, exec);
  std::vector<double> out(firms.size());
  for (std::size_t i = 0; i < firms.size(); ++i) {
    out[i] = firms[i].value;
    if (!(out[i] > 0.0) || !std::isfinite(out[i])) {
      throw Error("simulated value out of double range (ln X = " +
                  std::to_string(firms[i].log_value) + "); use the log output");
    }
  }
  return out;
}

std::vector<double> simulate_log(const ReedConfig& config, Exec exec) {
  const auto firms = simulate_firms(config, exec);
  std::vector<double> out(firms.size());
  std::transform(firms.begin(), firms.end(), out.begin(), [](const Firm& f) { return f.log_value; });
  return out;
}

TailExponents analytic_tail_exponent(const ReedConfig& config) {
  config.validate();
  const double m = config.log_z_mean;
  const double s2 = config.log_z_sd * config.log_z_sd;
  // ln q < 0 keeps the discriminant positive.
  const double root = std::sqrt(m * m - 2.0 * s2 * std::log(config.q()));
  return {(-m + root) / s2, (m + root) / s2};
}

double geometric_pgf(const ReedConfig& config, double s) {
  if (!(config.p > 0.0 && config.p < 1.0)) throw Error("p must lie in (0, 1)");
  if (!(std::abs(s) < 1.0 / config.q())) throw Error("outside radius of convergence");
  return config.p * s / (1.0 - config.q() * s);
}

}  // namespace zipfkit
