#include "zipfkit/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "zipfkit/error.hpp"
#include "zipfkit/random.hpp"

namespace zipfkit {

namespace {

constexpr int kReportVersion = 1;

std::vector<double> exp_all(std::span<const double> logs) {
  std::vector<double> out(logs.size());
  for (std::size_t i = 0; i < logs.size(); ++i) out[i] = std::exp(logs[i]);
  return out;
}

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, x);
  return buf;
}

}  // namespace

RunConfig parse_run_config(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "input", "output_dir", "xmin_policy", "gof_statistic", "bootstrap_replicates",
      "seed", "model", "select", "lmz_table"};
  if (!j.is_object()) throw Error("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw Error("unknown config key '" + key + "'");
  }
  RunConfig c;
  try {
    if (j.contains("input")) c.input = j.at("input").get<std::string>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("xmin_policy")) c.xmin_policy = parse_xmin_policy(j.at("xmin_policy").get<std::string>());
    if (j.contains("gof_statistic")) {
      c.gof_statistic = parse_gof_statistic(j.at("gof_statistic").get<std::string>());
    }
    if (j.contains("bootstrap_replicates")) {
      c.bootstrap_replicates = j.at("bootstrap_replicates").get<std::size_t>();
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("model")) c.model = parse_panel_model(j.at("model").get<std::string>());
    if (j.contains("select")) c.select = j.at("select").get<bool>();
    if (j.contains("lmz_table")) {
      const auto& t = j.at("lmz_table");
      c.lmz_table.enabled = t.value("enabled", true);
      if (t.contains("sizes")) c.lmz_table.sizes = t.at("sizes").get<std::vector<std::size_t>>();
      if (t.contains("levels")) c.lmz_table.levels = t.at("levels").get<std::vector<double>>();
      if (t.contains("replicates")) c.lmz_table.replicates = t.at("replicates").get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid config: ") + e.what());
  }
  if (c.bootstrap_replicates < 100) throw Error("too few replicates");
  if (c.model != PanelModel::fe_twoway) {
    throw Error("the pipeline derives fundamentals from the two-way fixed effects model (fe-2w)");
  }
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
  return parse_run_config(j);
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"input", c.input},
          {"output_dir", c.output_dir},
          {"xmin_policy", to_string(c.xmin_policy)},
          {"gof_statistic", c.gof_statistic == GofStatistic::ks_d ? "ks" : "cvm"},
          {"bootstrap_replicates", c.bootstrap_replicates},
          {"seed", c.seed},
          {"model", std::string(to_string(c.model))},
          {"select", c.select},
          {"lmz_table",
           {{"enabled", c.lmz_table.enabled},
            {"sizes", c.lmz_table.sizes},
            {"levels", c.lmz_table.levels},
            {"replicates", c.lmz_table.replicates}}}};
}

SeriesSummary analyze_series(const std::string& label, std::span<const double> values,
                             const RunConfig& config, std::uint64_t stream) {
  try {
    const double x_min = select_xmin(values, config.xmin_policy);
    const TailSample sample(std::vector<double>(values.begin(), values.end()), x_min);
    SeriesSummary s;
    s.label = label;
    s.fit = fit_alpha_mle(sample);
    s.gof = bootstrap_pvalue(sample, s.fit, config.gof_statistic, config.bootstrap_replicates,
                             derive_seed(config.seed, stream));
    s.zipf = zipf_tests(sample, s.fit);
    return s;
  } catch (const Error& e) {
    throw Error("series '" + label + "': " + e.what());
  }
}

nlohmann::json to_json(const SeriesSummary& s) {
  return {{"label", s.label}, {"fit", to_json(s.fit)}, {"gof", to_json(s.gof)},
          {"zipf", to_json(s.zipf)}};
}

std::string format_summary_table(const std::string& title, std::span<const SeriesSummary> rows) {
  std::ostringstream out;
  char line[256];
  out << title << '\n';
  std::snprintf(line, sizeof(line), "%-14s %10s %12s %12s %10s %10s %8s\n", "series",
                "exponent", "X_min", "CvM p", "LMZ", "LR", "tail n");
  out << line;
  for (const auto& r : rows) {
    std::snprintf(line, sizeof(line), "%-14s %10s %12s %12s %10s %10s %8zu\n", r.label.c_str(),
                  fixed(r.fit.alpha, 3).c_str(), fixed(r.fit.x_min, 4).c_str(),
                  fixed(r.gof.p_value, 3).c_str(), fixed(r.zipf.lmz, 3).c_str(),
                  fixed(r.zipf.lr, 3).c_str(), r.fit.tail_n);
    out << line;
  }
  return out.str();
}

ReportBundle run_pipeline(const RunConfig& config) {
  if (config.input.empty()) throw Error("config has no input path");
  return run_pipeline(config, load_panel(config.input));
}

ReportBundle run_pipeline(const RunConfig& config, const LoadedPanel& data) {
  const auto& panel = data.panel;
  ReportBundle bundle;
  bundle.fit = fit(panel, PanelModel::fe_twoway);
  bundle.ln_theoretical = theoretical_price(bundle.fit, panel);
  bundle.ln_fundamentals = fundamentals(bundle.fit, panel);

  std::vector<double> ln_actual(panel.size());
  std::vector<std::vector<double>> ln_indicator(kRegressors, std::vector<double>(panel.size()));
  for (std::size_t r = 0; r < panel.size(); ++r) {
    ln_actual[r] = panel.records()[r].ln_y;
    for (std::size_t k = 0; k < kRegressors; ++k) ln_indicator[k][r] = panel.records()[r].ln_x[k];
  }
  const std::vector<std::pair<std::string, std::vector<double>>> price_series = {
      {"actual", exp_all(ln_actual)},
      {"theoretical", exp_all(bundle.ln_theoretical)},
      {"fundamental", exp_all(bundle.ln_fundamentals)}};
  const std::vector<std::pair<std::string, std::vector<double>>> indicator_series = {
      {"dividends", exp_all(ln_indicator[0])},
      {"cash_flow", exp_all(ln_indicator[1])},
      {"book_value", exp_all(ln_indicator[2])}};

  std::uint64_t stream = 0;
  for (const auto& [label, values] : price_series) {
    bundle.prices.push_back(analyze_series(label, values, config, stream++));
  }
  for (const auto& [label, values] : indicator_series) {
    bundle.indicators.push_back(analyze_series(label, values, config, stream++));
  }
  bundle.price_vs_fundamentals = ks_two_sample(price_series[0].second, price_series[2].second);

  nlohmann::json& j = bundle.report;
  j["format"] = "zipfkit-report";
  j["version"] = kReportVersion;
  j["config"] = to_json(config);
  j["data"] = to_json(data.drops);
  j["data"]["records"] = panel.size();
  j["data"]["companies"] = panel.companies().size();
  j["data"]["years"] = panel.years().size();
  j["panel_fit"] = to_json(bundle.fit);
  if (config.select) j["model_selection"] = to_json(select_model(panel));
  j["price_series"] = nlohmann::json::array();
  for (const auto& s : bundle.prices) j["price_series"].push_back(to_json(s));
  j["indicator_series"] = nlohmann::json::array();
  for (const auto& s : bundle.indicators) j["indicator_series"].push_back(to_json(s));
  j["actual_vs_fundamental"] = to_json(bundle.price_vs_fundamentals);

  std::vector<CriticalValue> table;
  if (config.lmz_table.enabled) {
    table = lmz_critical_table(config.lmz_table.sizes, config.lmz_table.levels,
                               config.lmz_table.replicates, config.seed);
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table) rows.push_back({{"n", row.n}, {"level", row.level}, {"value", row.value}});
    j["lmz_table"] = std::move(rows);
  }

  bundle.summary = format_summary_table("Share price", bundle.prices) + '\n' +
                   format_summary_table("Per-share indicators", bundle.indicators) + '\n' +
                   "actual vs fundamental: two-sample KS D = " +
                   fixed(bundle.price_vs_fundamentals.statistic, 4) +
                   ", p = " + fixed(bundle.price_vs_fundamentals.p_value, 3) + '\n';

  if (!config.output_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.output_dir, ec);
    if (ec) throw IoError("cannot create '" + config.output_dir + "': " + ec.message());
    const std::string dir = config.output_dir + "/";
    write_text_file(dir + "report.json", j.dump(2) + "\n");
    write_text_file(dir + "summary.txt", bundle.summary);
    for (const auto& series : {price_series, indicator_series}) {
      for (const auto& [label, values] : series) export_ccdf(values, dir + "ccdf_" + label + ".txt");
    }
    if (!table.empty()) {
      std::ofstream out(dir + "lmz_table.csv");
      if (!out) throw IoError("cannot write '" + dir + "lmz_table.csv'");
      write_critical_table(out, table, config.lmz_table.levels);
    }
  }
  return bundle;
}

}  // namespace zipfkit
