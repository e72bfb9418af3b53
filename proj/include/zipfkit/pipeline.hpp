#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "zipfkit/gof.hpp"
#include "zipfkit/io.hpp"
#include "zipfkit/panel.hpp"
#include "zipfkit/tail.hpp"
#include "zipfkit/zipf.hpp"

namespace zipfkit {

struct LmzTableSettings {
  bool enabled = false;
  std::vector<std::size_t> sizes{10, 15, 20, 25, 30, 50, 100, 200};
  std::vector<double> levels{0.05, 0.10};
  std::size_t replicates = 100000;
};

struct RunConfig {
  std::string input;       // panel CSV
  std::string output_dir;  // empty: nothing written
  XminPolicy xmin_policy = TailFractionXmin{0.02};
  GofStatistic gof_statistic = GofStatistic::cvm_w2;
  std::size_t bootstrap_replicates = 1000;
  std::uint64_t seed = 1;
  PanelModel model = PanelModel::fe_twoway;
  bool select = false;  // also run the model-selection tests
  LmzTableSettings lmz_table;
};

// Missing keys keep their defaults; unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& config);

struct SeriesSummary {
  std::string label;
  TailFit fit;
  GofReport gof;
  ZipfReport zipf;
};

// Threshold selection, MLE, bootstrap goodness of fit and the Zipf tests for
// one positive series. `stream` separates the bootstrap seeds of series
// analysed under the same config.
SeriesSummary analyze_series(const std::string& label, std::span<const double> values,
                             const RunConfig& config, std::uint64_t stream);

nlohmann::json to_json(const SeriesSummary& s);

// Columns: exponent, X_min, CvM p-value, LMZ, LR, tail n.
std::string format_summary_table(const std::string& title,
                                 std::span<const SeriesSummary> rows);

struct ReportBundle {
  nlohmann::json report;
  std::string summary;
  PanelFit fit;
  std::vector<double> ln_theoretical;
  std::vector<double> ln_fundamentals;
  std::vector<SeriesSummary> prices;      // actual, theoretical, fundamentals
  std::vector<SeriesSummary> indicators;  // dividends, cash flow, book value
  GofReport price_vs_fundamentals;
};

ReportBundle run_pipeline(const RunConfig& config);
ReportBundle run_pipeline(const RunConfig& config, const LoadedPanel& data);

}  // namespace zipfkit
