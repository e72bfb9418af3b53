// Command-line front end: tail fitting, goodness of fit, Zipf tests, panel
// estimation, the Reed simulator and the end-to-end pipeline.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "zipfkit/error.hpp"
#include "zipfkit/gof.hpp"
#include "zipfkit/io.hpp"
#include "zipfkit/panel.hpp"
#include "zipfkit/pipeline.hpp"
#include "zipfkit/reedsim.hpp"
#include "zipfkit/synthetic.hpp"
#include "zipfkit/tail.hpp"
#include "zipfkit/zipf.hpp"

namespace {

using namespace zipfkit;

struct SeriesInput {
  std::string path;
  std::string column;
  std::string xmin_policy = "frac:0.02";

  std::vector<double> load() const {
    return read_values(path, column.empty() ? std::nullopt : std::optional<std::string>(column));
  }
};

void add_series_options(CLI::App* cmd, SeriesInput& in) {
  cmd->add_option("--input", in.path, "Values file (whitespace separated) or CSV with --column")
      ->required();
  cmd->add_option("--column", in.column, "CSV column holding the values");
  cmd->add_option("--xmin-policy", in.xmin_policy, "fixed:<x> | frac:<f> | ks-scan")
      ->capture_default_str();
}

TailSample tail_from(const SeriesInput& in) {
  auto values = in.load();
  const double x_min = select_xmin(values, parse_xmin_policy(in.xmin_policy));
  return TailSample(std::move(values), x_min);
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zipfkit: power-law tails, Zipf tests and panel fundamentals"};
  app.require_subcommand(1);

  SeriesInput fit_in;
  auto* fit_cmd = app.add_subcommand("fit-tail", "Select x_min and fit the power-law exponent");
  add_series_options(fit_cmd, fit_in);

  SeriesInput gof_in;
  std::string gof_stat = "cvm";
  std::size_t gof_reps = 1000;
  std::uint64_t gof_seed = 1;
  auto* gof_cmd = app.add_subcommand("gof", "Bootstrap goodness of fit against the fitted Pareto");
  add_series_options(gof_cmd, gof_in);
  gof_cmd->add_option("--statistic", gof_stat, "cvm | ks")->capture_default_str();
  gof_cmd->add_option("--replicates", gof_reps)->capture_default_str();
  gof_cmd->add_option("--seed", gof_seed)->capture_default_str();

  SeriesInput zipf_in;
  bool zipf_table = false;
  std::vector<std::size_t> table_sizes{10, 15, 20, 25, 30, 50, 100, 200};
  std::vector<double> table_levels{0.05, 0.10};
  std::size_t table_reps = 100000;
  std::uint64_t table_seed = 1;
  std::string table_out;
  auto* zipf_cmd = app.add_subcommand("zipf", "LR and LMZ tests of alpha = 1, or the LMZ table");
  zipf_cmd->add_option("--input", zipf_in.path, "Values file");
  zipf_cmd->add_option("--column", zipf_in.column, "CSV column holding the values");
  zipf_cmd->add_option("--xmin-policy", zipf_in.xmin_policy)->capture_default_str();
  zipf_cmd->add_flag("--table", zipf_table, "Regenerate the LMZ critical-value table");
  zipf_cmd->add_option("--sizes", table_sizes)->delimiter(',')->capture_default_str();
  zipf_cmd->add_option("--levels", table_levels)->delimiter(',')->capture_default_str();
  zipf_cmd->add_option("--replicates", table_reps)->capture_default_str();
  zipf_cmd->add_option("--seed", table_seed)->capture_default_str();
  zipf_cmd->add_option("--out", table_out, "Table output path (default stdout)");

  std::string panel_path;
  std::string panel_model = "fe-2w";
  bool panel_select = false;
  bool panel_effects = false;
  auto* panel_cmd = app.add_subcommand("panel", "Estimate a panel model on a CSV panel");
  panel_cmd->add_option("--input", panel_path)->required();
  panel_cmd->add_option("--model", panel_model, "pooled | fe-i | fe-t | fe-2w | re-i")
      ->capture_default_str();
  panel_cmd->add_flag("--select", panel_select, "Run the F, LR, Hausman and AR(1) tests");
  panel_cmd->add_flag("--effects", panel_effects, "Include estimated effects in the output");

  std::string fund_path;
  std::string fund_out;
  auto* fund_cmd = app.add_subcommand(
      "fundamentals", "Per-record log theoretical price and fundamentals (two-way FE)");
  fund_cmd->add_option("--input", fund_path)->required();
  fund_cmd->add_option("--out", fund_out, "CSV output path (default stdout)");

  ReedConfig reed;
  std::string sim_out;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate firm fundamentals (multiplicative model)");
  sim_cmd->add_option("--p", reed.p, "Geometric stopping probability")->capture_default_str();
  sim_cmd->add_option("--mu", reed.log_z_mean, "Mean of ln Z")->capture_default_str();
  sim_cmd->add_option("--sigma", reed.log_z_sd, "Sd of ln Z")->capture_default_str();
  sim_cmd->add_option("--x0", reed.x0)->capture_default_str();
  sim_cmd->add_option("--firms", reed.n_firms)->capture_default_str();
  sim_cmd->add_option("--seed", reed.seed)->capture_default_str();
  sim_cmd->add_option("--out", sim_out, "Output path (default stdout)");
  bool sim_log = false;
  sim_cmd->add_flag("--log", sim_log, "Write ln X instead of X");

  SeriesInput ccdf_in;
  std::string ccdf_out;
  auto* ccdf_cmd = app.add_subcommand("ccdf", "Export the empirical CCDF as 'x ccdf' lines");
  ccdf_cmd->add_option("--input", ccdf_in.path)->required();
  ccdf_cmd->add_option("--column", ccdf_in.column);
  ccdf_cmd->add_option("--out", ccdf_out)->required();

  std::string config_path;
  auto* pipe_cmd = app.add_subcommand("pipeline", "Panel fit, fundamentals and tail tests per series");
  pipe_cmd->add_option("--config", config_path, "JSON run configuration")->required();

  std::string synth_kind = "linear";
  SyntheticPanelConfig synth;
  ReedPanelConfig synth_reed;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth-panel", "Write a synthetic panel CSV");
  synth_cmd->add_option("--kind", synth_kind, "linear | reed")->capture_default_str();
  synth_cmd->add_option("--companies", synth.companies)->capture_default_str();
  synth_cmd->add_option("--years", synth.years)->capture_default_str();
  synth_cmd->add_option("--gap", synth.gap_rate, "Probability that a cell is missing")
      ->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise_sd)->capture_default_str();
  synth_cmd->add_option("--p", synth_reed.reed.p)->capture_default_str();
  synth_cmd->add_option("--mu", synth_reed.reed.log_z_mean)->capture_default_str();
  synth_cmd->add_option("--sigma", synth_reed.reed.log_z_sd)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--out", synth_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*fit_cmd) {
      const auto sample = tail_from(fit_in);
      std::cout << nlohmann::json{{"xmin_policy", fit_in.xmin_policy},
                                  {"fit", to_json(fit_alpha_mle(sample))}}
                       .dump(2)
                << '\n';
    } else if (*gof_cmd) {
      const auto sample = tail_from(gof_in);
      const auto tail_fit = fit_alpha_mle(sample);
      const auto report =
          bootstrap_pvalue(sample, tail_fit, parse_gof_statistic(gof_stat), gof_reps, gof_seed);
      std::cout << nlohmann::json{{"xmin_policy", gof_in.xmin_policy},
                                  {"seed", gof_seed},
                                  {"fit", to_json(tail_fit)},
                                  {"gof", to_json(report)}}
                       .dump(2)
                << '\n';
    } else if (*zipf_cmd) {
      if (zipf_table) {
        const auto table = lmz_critical_table(table_sizes, table_levels, table_reps, table_seed);
        std::ostringstream out;
        write_critical_table(out, table, table_levels);
        emit(table_out, out.str());
      } else {
        if (zipf_in.path.empty()) throw Error("zipf needs --input or --table");
        const auto sample = tail_from(zipf_in);
        const auto tail_fit = fit_alpha_mle(sample);
        std::cout << nlohmann::json{{"xmin_policy", zipf_in.xmin_policy},
                                    {"fit", to_json(tail_fit)},
                                    {"zipf", to_json(zipf_tests(sample, tail_fit))}}
                         .dump(2)
                  << '\n';
      }
    } else if (*panel_cmd) {
      const auto data = load_panel(panel_path);
      nlohmann::json j;
      j["data"] = to_json(data.drops);
      j["fit"] = to_json(fit(data.panel, parse_panel_model(panel_model)), panel_effects);
      if (panel_select) j["model_selection"] = to_json(select_model(data.panel));
      std::cout << j.dump(2) << '\n';
    } else if (*fund_cmd) {
      const auto data = load_panel(fund_path);
      const auto two_way = fit(data.panel, PanelModel::fe_twoway);
      const auto theo = theoretical_price(two_way, data.panel);
      const auto fund = fundamentals(two_way, data.panel);
      std::ostringstream out;
      out << "company_id,year,ln_price,ln_theoretical,ln_fundamental\n";
      for (std::size_t r = 0; r < data.panel.size(); ++r) {
        const auto& rec = data.panel.records()[r];
        out << rec.company << ',' << rec.year << ',' << format_double(rec.ln_y) << ','
            << format_double(theo[r]) << ',' << format_double(fund[r]) << '\n';
      }
      emit(fund_out, out.str());
    } else if (*sim_cmd) {
      std::ostringstream out;
      write_values(out, sim_log ? simulate_log(reed) : simulate(reed));
      emit(sim_out, out.str());
    } else if (*ccdf_cmd) {
      export_ccdf(ccdf_in.load(), ccdf_out);
    } else if (*pipe_cmd) {
      const auto bundle = run_pipeline(load_run_config(config_path));
      std::cout << bundle.summary;
    } else if (*synth_cmd) {
      PanelDataset panel = [&] {
        if (synth_kind == "linear") return generate_linear_panel(synth).panel;
        if (synth_kind == "reed") {
          synth_reed.reed.n_firms = synth.companies;
          synth_reed.reed.seed = synth.seed;
          synth_reed.years = synth.years;
          synth_reed.gap_rate = synth.gap_rate;
          synth_reed.noise_sd = synth.noise_sd;
          return generate_reed_panel(synth_reed).panel;
        }
        throw Error("unknown synthetic panel kind '" + synth_kind + "'");
      }();
      write_raw_panel(synth_out, to_raw_rows(panel));
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
