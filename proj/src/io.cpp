#include "zipfkit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "zipfkit/error.hpp"

namespace zipfkit {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Comma-separated fields; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(trim(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(trim(field));
  return fields;
}

bool parse_number(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  auto res = std::from_chars(begin, text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

bool parse_int(const std::string& text, int& out) {
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return !text.empty() && res.ec == std::errc() && res.ptr == text.data() + text.size();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::size_t DropReport::total_dropped() const {
  std::size_t total = 0;
  for (const auto& [reason, count] : dropped) total += count;
  return total;
}

std::vector<RawPanelRow> read_raw_panel(const std::string& path) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": missing header");
  const auto header = split_csv(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  for (const char* name : {"company_id", "year", "price", "dividends", "cash_flow", "book_value"}) {
    if (!col.count(name)) throw Error(path + ": header lacks column '" + name + "'");
  }
  const bool has_shares = col.count("shares_outstanding") > 0;

  std::vector<RawPanelRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    auto fail = [&](const std::string& what) {
      return Error(path + ":" + std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != header.size()) {
      throw fail("expected " + std::to_string(header.size()) + " fields, found " +
                 std::to_string(fields.size()));
    }
    RawPanelRow row;
    row.company_id = fields[col["company_id"]];
    if (row.company_id.empty()) throw fail("empty company_id");
    if (!parse_int(fields[col["year"]], row.year)) throw fail("invalid year '" + fields[col["year"]] + "'");
    auto number = [&](const char* name, double& out) {
      if (!parse_number(fields[col[name]], out)) {
        throw fail(std::string("invalid ") + name + " '" + fields[col[name]] + "'");
      }
    };
    number("price", row.price);
    number("dividends", row.dividends);
    number("cash_flow", row.cash_flow);
    number("book_value", row.book_value);
    if (has_shares && !fields[col["shares_outstanding"]].empty()) {
      double shares = 0.0;
      number("shares_outstanding", shares);
      row.shares_outstanding = shares;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_raw_panel(const std::string& path, std::span<const RawPanelRow> rows) {
  bool any_shares = false;
  for (const auto& r : rows) any_shares = any_shares || r.shares_outstanding.has_value();
  auto out = open_output(path);
  out << "company_id,year,price,dividends,cash_flow,book_value";
  if (any_shares) out << ",shares_outstanding";
  out << '\n';
  for (const auto& r : rows) {
    out << csv_field(r.company_id) << ',' << r.year << ',' << format_double(r.price) << ','
        << format_double(r.dividends) << ',' << format_double(r.cash_flow) << ','
        << format_double(r.book_value);
    if (any_shares) {
      out << ',';
      if (r.shares_outstanding) out << format_double(*r.shares_outstanding);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing '" + path + "'");
}

LoadedPanel panel_from_rows(std::span<const RawPanelRow> rows) {
  DropReport drops;
  drops.input_rows = rows.size();
  std::vector<PanelRecord> records;
  std::set<std::pair<std::string, int>> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (!seen.emplace(row.company_id, row.year).second) {
      throw Error("row " + std::to_string(i + 1) + ": duplicate (company, year) '" +
                  row.company_id + "', " + std::to_string(row.year));
    }
    double per_share[3] = {row.dividends, row.cash_flow, row.book_value};
    if (row.shares_outstanding) {
      const double shares = *row.shares_outstanding;
      if (!std::isfinite(shares)) {
        ++drops.dropped["non-finite value"];
        continue;
      }
      if (!(shares > 0.0)) {
        ++drops.dropped["non-positive shares"];
        continue;
      }
      for (double& v : per_share) v /= shares;
    }
    const double values[4] = {row.price, per_share[0], per_share[1], per_share[2]};
    bool finite = true;
    bool positive = true;
    for (double v : values) {
      finite = finite && std::isfinite(v);
      positive = positive && v > 0.0;
    }
    if (!finite) {
      ++drops.dropped["non-finite value"];
      continue;
    }
    if (!positive) {
      ++drops.dropped["non-positive value"];
      continue;
    }
    PanelRecord rec;
    rec.company = row.company_id;
    rec.year = row.year;
    rec.ln_y = std::log(values[0]);
    for (std::size_t k = 0; k < kRegressors; ++k) rec.ln_x[k] = std::log(values[k + 1]);
    records.push_back(std::move(rec));
  }
  if (records.empty()) throw Error("no usable rows");
  return {PanelDataset(std::move(records)), std::move(drops)};
}

LoadedPanel load_panel(const std::string& path) {
  const auto rows = read_raw_panel(path);
  return panel_from_rows(rows);
}

std::vector<RawPanelRow> to_raw_rows(const PanelDataset& panel) {
  std::vector<RawPanelRow> rows;
  rows.reserve(panel.size());
  for (const auto& rec : panel.records()) {
    RawPanelRow row;
    row.company_id = rec.company;
    row.year = rec.year;
    row.price = std::exp(rec.ln_y);
    row.dividends = std::exp(rec.ln_x[0]);
    row.cash_flow = std::exp(rec.ln_x[1]);
    row.book_value = std::exp(rec.ln_x[2]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> read_values(const std::string& path, const std::optional<std::string>& column) {
  auto in = open_input(path);
  std::vector<double> values;
  if (!column) {
    std::string token;
    std::size_t index = 0;
    while (in >> token) {
      ++index;
      double v = 0.0;
      if (!parse_number(token, v)) {
        throw Error(path + ": value " + std::to_string(index) + " is not a number: '" + token + "'");
      }
      values.push_back(v);
    }
    return values;
  }
  std::string line;
  if (!std::getline(in, line)) throw Error(path + ": missing header");
  const auto header = split_csv(line);
  const auto it = std::find(header.begin(), header.end(), *column);
  if (it == header.end()) throw Error(path + ": no column '" + *column + "'");
  const auto idx = static_cast<std::size_t>(it - header.begin());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    double v = 0.0;
    if (idx >= fields.size() || !parse_number(fields[idx], v)) {
      throw Error(path + ":" + std::to_string(line_no) + ": invalid value in column '" + *column + "'");
    }
    values.push_back(v);
  }
  return values;
}

void write_values(std::ostream& out, std::span<const double> values) {
  for (double v : values) out << format_double(v) << '\n';
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_ccdf(std::ostream& out, std::span<const CcdfPoint> points) {
  for (const auto& p : points) out << format_double(p.x) << ' ' << format_double(p.prob) << '\n';
}

void export_ccdf(std::span<const double> values, const std::string& path) {
  const auto points = ccdf(values);
  auto out = open_output(path);
  write_ccdf(out, points);
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::vector<CcdfPoint> read_ccdf(const std::string& path) {
  auto in = open_input(path);
  std::vector<CcdfPoint> points;
  std::string x_text;
  std::string p_text;
  while (in >> x_text >> p_text) {
    CcdfPoint p{};
    if (!parse_number(x_text, p.x) || !parse_number(p_text, p.prob)) {
      throw Error(path + ": malformed ccdf line");
    }
    points.push_back(p);
  }
  return points;
}

void write_critical_table(std::ostream& out, std::span<const CriticalValue> table,
                          std::span<const double> levels) {
  out << "n,level,critical_value\n";
  for (const auto& row : table) {
    out << row.n << ',' << format_double(row.level) << ',' << format_double(row.value) << '\n';
  }
  for (double level : levels) {
    out << "inf," << format_double(level) << ',' << format_double(chi2_2_critical(level)) << '\n';
  }
}

void write_text_file(const std::string& path, const std::string& contents) {
  auto out = open_output(path);
  out << contents;
  if (!out) throw IoError("failed writing '" + path + "'");
}

nlohmann::json to_json(const TailFit& fit) {
  return {{"alpha", fit.alpha},
          {"x_min", fit.x_min},
          {"tail_n", fit.tail_n},
          {"std_err", fit.std_err},
          {"tail_fraction", fit.tail_fraction}};
}

nlohmann::json to_json(const GofReport& report) {
  return {{"statistic_name", std::string(to_string(report.statistic_name))},
          {"statistic", report.statistic},
          {"p_value", report.p_value},
          {"replicates", report.replicates}};
}

nlohmann::json to_json(const ZipfReport& report) {
  return {{"lr", report.lr},
          {"lr_p", report.lr_p},
          {"lmz", report.lmz},
          {"lmz_p", report.lmz_p},
          {"tail_n", report.tail_n},
          {"critical_source", std::string(to_string(report.critical_source))}};
}

nlohmann::json to_json(const PanelFit& fit, bool include_effects) {
  nlohmann::json j;
  j["model"] = std::string(to_string(fit.model));
  j["coefficients"] = {{"a0", fit.a0}, {"b1", fit.b[0]}, {"b2", fit.b[1]}, {"b3", fit.b[2]}};
  j["std_errors"] = {{"a0", fit.std_errors[0]},
                     {"b1", fit.std_errors[1]},
                     {"b2", fit.std_errors[2]},
                     {"b3", fit.std_errors[3]}};
  j["p_values"] = {{"a0", fit.p_values[0]},
                   {"b1", fit.p_values[1]},
                   {"b2", fit.p_values[2]},
                   {"b3", fit.p_values[3]}};
  j["r2"] = fit.r2;
  j["rss"] = fit.rss;
  j["df_resid"] = fit.df_resid;
  j["absorbed_effects"] = fit.absorbed;
  if (fit.model == PanelModel::re_individual) {
    j["sigma2_mu"] = fit.sigma2_mu;
    j["sigma2_eps"] = fit.sigma2_eps;
  }
  if (fit.model == PanelModel::fe_twoway) j["demean_sweeps"] = fit.demean_sweeps;
  j["warnings"] = fit.warnings;
  if (include_effects) {
    nlohmann::json mu = nlohmann::json::object();
    for (const auto& [company, v] : fit.mu) mu[company] = v;
    nlohmann::json gamma = nlohmann::json::object();
    for (const auto& [year, v] : fit.gamma) gamma[std::to_string(year)] = v;
    j["mu"] = std::move(mu);
    j["gamma"] = std::move(gamma);
  }
  return j;
}

nlohmann::json to_json(const SelectionReport& report) {
  return {{"f_fe",
           {{"statistic", finite_or_null(report.f_fe.statistic)},
            {"df1", report.f_fe.df1},
            {"df2", report.f_fe.df2},
            {"p_value", report.f_fe.p_value}}},
          {"lr_fe",
           {{"statistic", finite_or_null(report.lr_fe.statistic)},
            {"df", report.lr_fe.df},
            {"p_value", report.lr_fe.p_value}}},
          {"hausman",
           {{"statistic", report.hausman.statistic},
            {"df", report.hausman.df},
            {"p_value", report.hausman.p_value},
            {"non_positive_definite", report.hausman.non_positive_definite}}},
          {"wooldridge",
           {{"rho_hat", report.wooldridge.rho_hat},
            {"t_statistic", report.wooldridge.t_statistic},
            {"p_value", report.wooldridge.p_value},
            {"pairs", report.wooldridge.pairs}}}};
}

nlohmann::json to_json(const DropReport& report) {
  nlohmann::json dropped = nlohmann::json::object();
  for (const auto& [reason, count] : report.dropped) dropped[reason] = count;
  return {{"input_rows", report.input_rows},
          {"kept_rows", report.input_rows - report.total_dropped()},
          {"dropped", std::move(dropped)}};
}

}  // namespace zipfkit
