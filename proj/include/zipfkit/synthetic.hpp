#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "zipfkit/panel.hpp"
#include "zipfkit/reedsim.hpp"

namespace zipfkit {

// Two-way fixed effects coefficients of the reference price model.
inline constexpr double kDefaultA0 = 1.485;
inline constexpr std::array<double, kRegressors> kDefaultB = {0.137, 0.298, 0.378};

struct SyntheticPanelConfig {
  std::size_t companies = 200;
  std::size_t years = 10;
  int first_year = 2004;
  double gap_rate = 0.0;  // probability that a (company, year) cell is missing
  double noise_sd = 0.0;
  double effect_sd = 1.0;        // sd of mu_i; 0 disables individual effects
  double time_effect_sd = 0.3;   // sd of gamma_t; 0 disables time effects
  double effect_loading = 0.0;   // mu_i += loading * company mean regressor level
  double regressor_between_sd = 1.0;
  double regressor_within_sd = 0.5;
  std::uint64_t seed = 0;
};

struct SyntheticPanel {
  PanelDataset panel;
  std::vector<double> ln_fundamentals;  // a0 + mu_i + b'ln x per record
  std::vector<double> mu;               // per company, weighted zero-sum
  std::vector<double> gamma;            // per year, weighted zero-sum
};

// ln y = a0 + b'ln x + mu_i + gamma_t + noise with the default coefficients.
SyntheticPanel generate_linear_panel(const SyntheticPanelConfig& config);

struct ReedPanelConfig {
  ReedConfig reed;  // reed.n_firms companies
  std::size_t years = 10;
  int first_year = 2004;
  double gap_rate = 0.4;
  double regressor_sd = 0.3;  // per-record scatter of each indicator around the firm level
  double time_effect_sd = 0.2;
  double noise_sd = 0.05;
};

// Firm fundamentals levels from the multiplicative model, embedded in the
// two-way structure: indicators track the firm level, mu_i tops the fitted
// part up to it, and prices add year shocks and noise.
SyntheticPanel generate_reed_panel(const ReedPanelConfig& config);

}  // namespace zipfkit
