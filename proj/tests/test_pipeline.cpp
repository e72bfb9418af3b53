#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "zipfkit/error.hpp"
#include "zipfkit/io.hpp"
#include "zipfkit/pipeline.hpp"
#include "zipfkit/synthetic.hpp"

namespace zipfkit {
namespace {

using testing::temp_path;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ReedPanelConfig reed_panel(std::size_t firms, std::uint64_t seed) {
  ReedPanelConfig cfg;
  cfg.reed.p = 0.05;
  cfg.reed.n_firms = firms;
  cfg.reed.seed = seed;
  return cfg;
}

RunConfig small_run(std::uint64_t seed) {
  RunConfig cfg;
  cfg.bootstrap_replicates = 100;
  cfg.seed = seed;
  return cfg;
}

TEST(RunConfig, DefaultsAndRoundTrip) {
  const auto c = parse_run_config(nlohmann::json::object());
  EXPECT_EQ(to_string(c.xmin_policy), "frac:0.02");
  EXPECT_EQ(c.bootstrap_replicates, 1000u);
  EXPECT_EQ(c.model, PanelModel::fe_twoway);
  EXPECT_FALSE(c.lmz_table.enabled);

  const auto j = nlohmann::json::parse(R"({
    "input": "panel.csv", "output_dir": "out", "xmin_policy": "ks-scan",
    "gof_statistic": "ks", "bootstrap_replicates": 500, "seed": 99,
    "model": "fe-2w", "select": true,
    "lmz_table": {"sizes": [10, 30], "levels": [0.1], "replicates": 20000}
  })");
  const auto d = parse_run_config(j);
  EXPECT_EQ(to_json(parse_run_config(to_json(d))), to_json(d));
  EXPECT_EQ(to_json(d)["seed"], 99);
  EXPECT_EQ(to_json(d)["xmin_policy"], "ks-scan");
  EXPECT_TRUE(d.lmz_table.enabled);
  EXPECT_EQ(d.lmz_table.sizes, (std::vector<std::size_t>{10, 30}));
}

TEST(RunConfig, Rejections) {
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"seeds": 1})")), Error);
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"model": "pooled"})")), Error);
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"bootstrap_replicates": 10})")), Error);
  EXPECT_THROW(parse_run_config(nlohmann::json::parse(R"({"seed": "one"})")), Error);
  EXPECT_THROW(parse_run_config(nlohmann::json::parse("[1]")), Error);
  EXPECT_THROW(load_run_config(temp_path("missing_config.json")), IoError);
}

TEST(Pipeline, ReportStructureAndDeterminism) {
  const auto syn = generate_reed_panel(reed_panel(3000, 4));
  const LoadedPanel data{syn.panel, DropReport{syn.panel.size(), {}}};
  auto cfg = small_run(17);
  cfg.select = true;
  const auto a = run_pipeline(cfg, data);
  const auto b = run_pipeline(cfg, data);
  EXPECT_EQ(a.report.dump(), b.report.dump());
  EXPECT_EQ(a.summary, b.summary);

  const auto& j = a.report;
  EXPECT_EQ(j["version"], 1);
  EXPECT_EQ(j["config"]["seed"], 17);
  EXPECT_EQ(j["data"]["records"], syn.panel.size());
  EXPECT_TRUE(j.contains("model_selection"));
  ASSERT_EQ(j["price_series"].size(), 3u);
  EXPECT_EQ(j["price_series"][2]["label"], "fundamental");
  ASSERT_EQ(j["indicator_series"].size(), 3u);
  EXPECT_EQ(j["indicator_series"][0]["label"], "dividends");
  EXPECT_EQ(j["indicator_series"][2]["label"], "book_value");
  EXPECT_FALSE(j.contains("lmz_table"));

  // Different seeds move only the Monte Carlo parts.
  const auto c = run_pipeline(small_run(18), data);
  EXPECT_EQ(c.prices[0].fit.alpha, a.prices[0].fit.alpha);
  EXPECT_NE(c.report.dump(), a.report.dump());
}

TEST(Pipeline, SummaryColumns) {
  const auto syn = generate_reed_panel(reed_panel(2000, 5));
  const auto out = run_pipeline(small_run(1), LoadedPanel{syn.panel, {}});
  const auto header_at = out.summary.find("exponent");
  ASSERT_NE(header_at, std::string::npos);
  for (const char* col : {"X_min", "CvM p", "LMZ", "LR", "tail n"}) {
    EXPECT_NE(out.summary.find(col), std::string::npos) << col;
  }
  for (const char* row : {"actual", "theoretical", "fundamental", "dividends", "cash_flow",
                          "book_value", "two-sample KS"}) {
    EXPECT_NE(out.summary.find(row), std::string::npos) << row;
  }
}

TEST(Pipeline, FundamentalsExponentTracksGenerativeModel) {
  const auto panel_cfg = reed_panel(20000, 6);
  const auto syn = generate_reed_panel(panel_cfg);
  auto cfg = small_run(2);
  cfg.xmin_policy = TailFractionXmin{0.01};
  const auto out = run_pipeline(cfg, LoadedPanel{syn.panel, {}});
  const double analytic = analytic_tail_exponent(panel_cfg.reed).alpha;
  EXPECT_NEAR(out.prices[2].fit.alpha, analytic, 0.1);
  // Recovered fundamentals match the generator's.
  ASSERT_EQ(out.ln_fundamentals.size(), syn.ln_fundamentals.size());
  for (std::size_t r = 0; r < syn.ln_fundamentals.size(); r += 97) {
    EXPECT_NEAR(out.ln_fundamentals[r], syn.ln_fundamentals[r], 0.12);
  }
}

TEST(Pipeline, WritesArtifactsFromFile) {
  const auto syn = generate_reed_panel(reed_panel(1500, 7));
  const auto csv = temp_path("pipeline_panel.csv");
  write_raw_panel(csv, to_raw_rows(syn.panel));
  const auto dir = temp_path("pipeline_out");
  std::filesystem::remove_all(dir);

  const auto config_path = temp_path("pipeline_config.json");
  {
    std::ofstream out(config_path);
    out << nlohmann::json{{"input", csv},
                          {"output_dir", dir},
                          {"bootstrap_replicates", 100},
                          {"seed", 3},
                          {"lmz_table", {{"sizes", {10, 20}}, {"replicates", 10000}}}};
  }
  const auto cfg = load_run_config(config_path);
  const auto bundle = run_pipeline(cfg);
  for (const char* name : {"report.json", "summary.txt", "ccdf_actual.txt", "ccdf_theoretical.txt",
                           "ccdf_fundamental.txt", "ccdf_dividends.txt", "ccdf_cash_flow.txt",
                           "ccdf_book_value.txt", "lmz_table.csv"}) {
    EXPECT_TRUE(std::filesystem::exists(dir + "/" + name)) << name;
  }
  const auto report = nlohmann::json::parse(slurp(dir + "/report.json"));
  EXPECT_EQ(report, bundle.report);
  EXPECT_EQ(report["lmz_table"].size(), 4u);
  const auto first = slurp(dir + "/report.json");
  run_pipeline(cfg);
  EXPECT_EQ(slurp(dir + "/report.json"), first);
  EXPECT_EQ(slurp(dir + "/lmz_table.csv").substr(0, 22), "n,level,critical_value");
}

TEST(Pipeline, SeriesErrorsCarryLabels) {
  std::vector<double> flat(50, 2.0);
  try {
    analyze_series("odd", flat, small_run(1), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("series 'odd'"), std::string::npos);
  }
}

}  // namespace
}  // namespace zipfkit
