#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "zipfkit/error.hpp"
#include "zipfkit/io.hpp"
#include "zipfkit/synthetic.hpp"

namespace zipfkit {
namespace {

using testing::pareto_sample;
using testing::temp_path;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(LoadPanel, PerShareDivision) {
  const auto path = temp_path("per_share.csv");
  write_file(path,
             "company_id,year,price,dividends,cash_flow,book_value,shares_outstanding\n"
             "A,2004,30,100,50,2,50\n"
             "B,2004,12,1.5,2,3,\n");
  const auto loaded = load_panel(path);
  ASSERT_EQ(loaded.panel.size(), 2u);
  const auto& a = loaded.panel.records()[0];
  EXPECT_DOUBLE_EQ(a.ln_y, std::log(30.0));
  EXPECT_DOUBLE_EQ(a.ln_x[0], std::log(2.0));
  EXPECT_DOUBLE_EQ(a.ln_x[1], std::log(1.0));
  EXPECT_DOUBLE_EQ(a.ln_x[2], std::log(0.04));
  const auto& b = loaded.panel.records()[1];
  EXPECT_DOUBLE_EQ(b.ln_x[0], std::log(1.5));
  EXPECT_EQ(loaded.drops.total_dropped(), 0u);
}

TEST(LoadPanel, ColumnOrderIsFree) {
  const auto path = temp_path("reordered.csv");
  write_file(path,
             "year,book_value,company_id,cash_flow,dividends,price\n"
             "2005,4,\"X, Inc.\",3,2,1\n");
  const auto rows = read_raw_panel(path);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].company_id, "X, Inc.");
  EXPECT_EQ(rows[0].year, 2005);
  EXPECT_EQ(rows[0].price, 1.0);
  EXPECT_EQ(rows[0].book_value, 4.0);
  EXPECT_FALSE(rows[0].shares_outstanding.has_value());
}

TEST(LoadPanel, DropsWithReasons) {
  const auto path = temp_path("drops.csv");
  write_file(path,
             "company_id,year,price,dividends,cash_flow,book_value,shares_outstanding\n"
             "A,2004,10,0,1,1,\n"
             "A,2005,10,1,-1,1,\n"
             "B,2004,10,1,1,1,0\n"
             "B,2005,nan,1,1,1,\n"
             "C,2004,10,1,1,1,\n");
  const auto loaded = load_panel(path);
  EXPECT_EQ(loaded.panel.size(), 1u);
  EXPECT_EQ(loaded.drops.input_rows, 5u);
  EXPECT_EQ(loaded.drops.dropped.at("non-positive value"), 2u);
  EXPECT_EQ(loaded.drops.dropped.at("non-positive shares"), 1u);
  EXPECT_EQ(loaded.drops.dropped.at("non-finite value"), 1u);
  EXPECT_EQ(loaded.drops.total_dropped() + loaded.panel.size(), loaded.drops.input_rows);
  const auto j = to_json(loaded.drops);
  EXPECT_EQ(j["kept_rows"], 1);
}

TEST(LoadPanel, Errors) {
  const auto malformed = temp_path("malformed.csv");
  write_file(malformed,
             "company_id,year,price,dividends,cash_flow,book_value\n"
             "A,2004,1,1,1,1\n"
             "A,2005,1,abc,1,1\n");
  try {
    load_panel(malformed);
    FAIL();
  } catch (const IoError&) {
    FAIL() << "validation error expected";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }

  const auto duplicate = temp_path("duplicate.csv");
  write_file(duplicate,
             "company_id,year,price,dividends,cash_flow,book_value\n"
             "A,2004,1,1,1,1\n"
             "A,2004,2,2,2,2\n");
  EXPECT_THROW(load_panel(duplicate), Error);

  const auto empty = temp_path("empty_rows.csv");
  write_file(empty,
             "company_id,year,price,dividends,cash_flow,book_value\n"
             "A,2004,0,1,1,1\n");
  try {
    load_panel(empty);
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "no usable rows");
  }

  const auto short_row = temp_path("short_row.csv");
  write_file(short_row, "company_id,year,price,dividends,cash_flow,book_value\nA,2004,1,1\n");
  EXPECT_THROW(load_panel(short_row), Error);

  const auto no_column = temp_path("no_column.csv");
  write_file(no_column, "company_id,year,price,dividends,cash_flow\nA,2004,1,1,1\n");
  EXPECT_THROW(load_panel(no_column), Error);

  EXPECT_THROW(load_panel(temp_path("does_not_exist.csv")), IoError);
}

TEST(LoadPanel, LargeGappedPanelBookkeeping) {
  SyntheticPanelConfig cfg;
  cfg.companies = 7796;
  cfg.years = 10;
  cfg.gap_rate = 0.4;
  cfg.noise_sd = 0.2;
  cfg.seed = 31;
  const auto syn = generate_linear_panel(cfg);
  auto rows = to_raw_rows(syn.panel);
  std::size_t zeroed = 0;
  for (std::size_t i = 0; i < rows.size(); i += 13) {
    rows[i].dividends = 0.0;
    ++zeroed;
  }
  const auto path = temp_path("large_panel.csv");
  write_raw_panel(path, rows);
  const auto loaded = load_panel(path);
  EXPECT_EQ(loaded.drops.input_rows, rows.size());
  EXPECT_EQ(loaded.panel.size(), rows.size() - zeroed);
  EXPECT_EQ(loaded.drops.dropped.at("non-positive value"), zeroed);
  EXPECT_NEAR(static_cast<double>(rows.size()) / 77960.0, 0.6, 0.01);

  // Surviving records survive the text round trip exactly.
  std::size_t j = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i % 13 == 0) continue;
    const auto& rec = loaded.panel.records()[j++];
    EXPECT_EQ(rec.company, rows[i].company_id);
    EXPECT_EQ(rec.ln_y, std::log(rows[i].price));
    if (::testing::Test::HasFailure()) break;
  }
}

TEST(Ccdf, ExportFormat) {
  const auto path = temp_path("ccdf_small.txt");
  export_ccdf(std::vector<double>{3, 1, 2}, path);
  EXPECT_EQ(read_file(path),
            "1 0.66666666666666663\n"
            "2 0.33333333333333331\n"
            "3 0\n");
}

TEST(Ccdf, RoundTripExact) {
  const auto v = pareto_sample(2000, 1.0, 1.0, 6);
  const auto path = temp_path("ccdf_pareto.txt");
  export_ccdf(v, path);
  const auto back = read_ccdf(path);
  const auto direct = ccdf(v);
  ASSERT_EQ(back.size(), direct.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].x, direct[i].x);
    EXPECT_EQ(back[i].prob, direct[i].prob);
  }
  // The exported curve is a line of slope -1 in log-log.
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (const auto& p : back) {
    if (p.prob <= 0.0) continue;
    const double x = std::log(p.x);
    const double y = std::log(p.prob);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  EXPECT_NEAR((n * sxy - sx * sy) / (n * sxx - sx * sx), -1.0, 0.1);
}

TEST(Ccdf, UnwritablePath) {
  EXPECT_THROW(export_ccdf(std::vector<double>{1.0}, "/nonexistent-dir/x.txt"), IoError);
}

TEST(Values, ReadPlainAndColumn) {
  const auto plain = temp_path("values.txt");
  write_file(plain, "1.5 2\n3e2\n\n4\n");
  EXPECT_EQ(read_values(plain), (std::vector<double>{1.5, 2, 300, 4}));
  write_file(plain, "1 x\n");
  EXPECT_THROW(read_values(plain), Error);

  const auto csv = temp_path("values.csv");
  write_file(csv, "id,size\na,10\nb,20.5\n");
  EXPECT_EQ(read_values(csv, "size"), (std::vector<double>{10, 20.5}));
  EXPECT_THROW(read_values(csv, "weight"), Error);
}

TEST(Format, SeventeenDigitsRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 133.4, 1e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
}

TEST(CriticalTable, Layout) {
  const std::vector<CriticalValue> rows = {{10, 0.1, 4.38}, {10, 0.05, 6.0}};
  const std::vector<double> levels = {0.1, 0.05};
  std::ostringstream out;
  write_critical_table(out, rows, levels);
  const auto text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), "n,level,critical_value");
  EXPECT_NE(text.find("10,0.10000000000000001,4.3799999999999999\n"), std::string::npos);
  EXPECT_NE(text.find("inf,0.050000000000000003,5.99146"), std::string::npos);
}

TEST(Json, FitFields) {
  TailFit fit{1.003, 133.4, 943, 0.0327, 0.02};
  const auto j = to_json(fit);
  EXPECT_EQ(j["alpha"], 1.003);
  EXPECT_EQ(j["tail_n"], 943);
  GofReport g{GofStatistic::cvm_w2, 0.1, 0.132, 1000};
  EXPECT_EQ(to_json(g)["statistic_name"], "CvM_W2");
  ZipfReport z;
  z.critical_source = CriticalSource::monte_carlo_table;
  EXPECT_EQ(to_json(z)["critical_source"], "monte_carlo_table");
}

}  // namespace
}  // namespace zipfkit
