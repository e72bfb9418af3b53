#include "zipfkit/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "zipfkit/error.hpp"
#include "zipfkit/random.hpp"

namespace zipfkit {

namespace {

std::string company_name(std::size_t i) {
  std::string digits = std::to_string(i);
  return "C" + std::string(digits.size() < 6 ? 6 - digits.size() : 0, '0') + digits;
}

// Which (company, year) cells exist; each company keeps at least one year.
std::vector<std::vector<bool>> draw_cells(std::size_t companies, std::size_t years,
                                          double gap_rate, Engine& eng) {
  if (!(gap_rate >= 0.0 && gap_rate < 1.0)) throw Error("gap rate must lie in [0, 1)");
  std::vector<std::vector<bool>> present(companies, std::vector<bool>(years, true));
  for (auto& row : present) {
    bool any = false;
    for (std::size_t t = 0; t < years; ++t) {
      row[t] = open_uniform(eng) >= gap_rate;
      any = any || row[t];
    }
    if (!any) row[static_cast<std::size_t>(open_uniform(eng) * static_cast<double>(years))] = true;
  }
  return present;
}

void center_weighted(std::vector<double>& effect, const std::vector<std::size_t>& counts) {
  double sum = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < effect.size(); ++i) {
    sum += effect[i] * static_cast<double>(counts[i]);
    total += static_cast<double>(counts[i]);
  }
  for (double& e : effect) e -= sum / total;
}

std::vector<std::size_t> row_counts(const std::vector<std::vector<bool>>& cells) {
  std::vector<std::size_t> out;
  for (const auto& row : cells) out.push_back(static_cast<std::size_t>(std::count(row.begin(), row.end(), true)));
  return out;
}

std::vector<std::size_t> column_counts(const std::vector<std::vector<bool>>& cells, std::size_t years) {
  std::vector<std::size_t> out(years, 0);
  for (const auto& row : cells) {
    for (std::size_t t = 0; t < years; ++t) out[t] += row[t];
  }
  return out;
}

}  // namespace

SyntheticPanel generate_linear_panel(const SyntheticPanelConfig& config) {
  if (config.companies < 2 || config.years < 2) throw Error("need at least two companies and years");
  Engine eng = make_engine(config.seed, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto cells = draw_cells(config.companies, config.years, config.gap_rate, eng);

  std::vector<std::array<double, kRegressors>> level(config.companies);
  std::vector<double> mu(config.companies);
  for (std::size_t i = 0; i < config.companies; ++i) {
    double mean_level = 0.0;
    for (auto& l : level[i]) {
      l = config.regressor_between_sd * normal(eng);
      mean_level += l / static_cast<double>(kRegressors);
    }
    mu[i] = config.effect_sd * normal(eng) + config.effect_loading * mean_level;
  }
  std::vector<double> gamma(config.years);
  for (double& g : gamma) g = config.time_effect_sd * normal(eng);
  center_weighted(mu, row_counts(cells));
  center_weighted(gamma, column_counts(cells, config.years));

  std::vector<PanelRecord> records;
  std::vector<double> truth;
  for (std::size_t i = 0; i < config.companies; ++i) {
    for (std::size_t t = 0; t < config.years; ++t) {
      if (!cells[i][t]) continue;
      PanelRecord rec;
      rec.company = company_name(i);
      rec.year = config.first_year + static_cast<int>(t);
      double fundamental = kDefaultA0 + mu[i];
      for (std::size_t k = 0; k < kRegressors; ++k) {
        rec.ln_x[k] = level[i][k] + config.regressor_within_sd * normal(eng);
        fundamental += kDefaultB[k] * rec.ln_x[k];
      }
      rec.ln_y = fundamental + gamma[t] + config.noise_sd * normal(eng);
      records.push_back(std::move(rec));
      truth.push_back(fundamental);
    }
  }
  return {PanelDataset(std::move(records)), std::move(truth), std::move(mu), std::move(gamma)};
}

SyntheticPanel generate_reed_panel(const ReedPanelConfig& config) {
  if (config.years < 2) throw Error("need at least two years");
  const auto levels = simulate(config.reed);
  const std::size_t companies = levels.size();
  Engine eng = make_engine(config.reed.seed, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto cells = draw_cells(companies, config.years, config.gap_rate, eng);

  double b_sum = 0.0;
  for (double b : kDefaultB) b_sum += b;
  std::vector<double> mu(companies);
  for (std::size_t i = 0; i < companies; ++i) mu[i] = (1.0 - b_sum) * std::log(levels[i]) - kDefaultA0;
  std::vector<double> gamma(config.years);
  for (double& g : gamma) g = config.time_effect_sd * normal(eng);
  center_weighted(mu, row_counts(cells));
  center_weighted(gamma, column_counts(cells, config.years));

  std::vector<PanelRecord> records;
  std::vector<double> truth;
  for (std::size_t i = 0; i < companies; ++i) {
    const double firm_level = std::log(levels[i]);
    for (std::size_t t = 0; t < config.years; ++t) {
      if (!cells[i][t]) continue;
      PanelRecord rec;
      rec.company = company_name(i);
      rec.year = config.first_year + static_cast<int>(t);
      double fundamental = kDefaultA0 + mu[i];
      for (std::size_t k = 0; k < kRegressors; ++k) {
        rec.ln_x[k] = firm_level + config.regressor_sd * normal(eng);
        fundamental += kDefaultB[k] * rec.ln_x[k];
      }
      rec.ln_y = fundamental + gamma[t] + config.noise_sd * normal(eng);
      records.push_back(std::move(rec));
      truth.push_back(fundamental);
    }
  }
  return {PanelDataset(std::move(records)), std::move(truth), std::move(mu), std::move(gamma)};
}

}  // namespace zipfkit
