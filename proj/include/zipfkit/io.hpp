#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "zipfkit/gof.hpp"
#include "zipfkit/panel.hpp"
#include "zipfkit/tail.hpp"
#include "zipfkit/zipf.hpp"

namespace zipfkit {

// One line of the ingestion CSV. Header (any column order):
//   company_id,year,price,dividends,cash_flow,book_value[,shares_outstanding]
// When shares_outstanding is present and non-empty, dividends, cash_flow and
// book_value are company totals and are divided by it; price is always per
// share.
struct RawPanelRow {
  std::string company_id;
  int year = 0;
  double price = 0.0;
  double dividends = 0.0;
  double cash_flow = 0.0;
  double book_value = 0.0;
  std::optional<double> shares_outstanding;
};

struct DropReport {
  std::size_t input_rows = 0;
  std::map<std::string, std::size_t> dropped;  // reason -> rows
  std::size_t total_dropped() const;
};

struct LoadedPanel {
  PanelDataset panel;
  DropReport drops;
};

std::vector<RawPanelRow> read_raw_panel(const std::string& path);
void write_raw_panel(const std::string& path, std::span<const RawPanelRow> rows);

// Per-share conversion, positivity filter and log transform.
LoadedPanel panel_from_rows(std::span<const RawPanelRow> rows);
LoadedPanel load_panel(const std::string& path);

// Rows with per-share values exp(ln ...) and no share count.
std::vector<RawPanelRow> to_raw_rows(const PanelDataset& panel);

// Whitespace or newline separated numbers; with `column`, the named column of
// a comma-separated file with header.
std::vector<double> read_values(const std::string& path,
                                const std::optional<std::string>& column = std::nullopt);
void write_values(std::ostream& out, std::span<const double> values);

// "%.17g" so that values survive a text round trip exactly.
std::string format_double(double x);

// Two columns "x ccdf", ascending x.
void write_ccdf(std::ostream& out, std::span<const CcdfPoint> points);
void export_ccdf(std::span<const double> values, const std::string& path);
std::vector<CcdfPoint> read_ccdf(const std::string& path);

// Delimited "n,level,critical_value" with the chi-squared(2) limit appended
// as n = inf for every level.
void write_critical_table(std::ostream& out, std::span<const CriticalValue> table,
                          std::span<const double> levels);

void write_text_file(const std::string& path, const std::string& contents);

nlohmann::json to_json(const TailFit& fit);
nlohmann::json to_json(const GofReport& report);
nlohmann::json to_json(const ZipfReport& report);
nlohmann::json to_json(const PanelFit& fit, bool include_effects = false);
nlohmann::json to_json(const SelectionReport& report);
nlohmann::json to_json(const DropReport& report);

}  // namespace zipfkit
