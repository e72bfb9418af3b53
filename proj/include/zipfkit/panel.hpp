#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace zipfkit {

inline constexpr std::size_t kRegressors = 3;

// One (company, year) observation in log space: ln price and the logs of
// dividends, cash flow and book value per share.
struct PanelRecord {
  std::string company;
  int year = 0;
  double ln_y = 0.0;
  std::array<double, kRegressors> ln_x{};
};

// Unbalanced panel. Records keep their input order; companies and years are
// indexed densely in sorted order.
class PanelDataset {
 public:
  explicit PanelDataset(std::vector<PanelRecord> records);

  const std::vector<PanelRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  const std::vector<std::string>& companies() const { return companies_; }
  const std::vector<int>& years() const { return years_; }
  std::size_t company_of(std::size_t record) const { return company_idx_[record]; }
  std::size_t year_of(std::size_t record) const { return year_idx_[record]; }
  const std::vector<std::size_t>& company_counts() const { return company_counts_; }
  const std::vector<std::size_t>& year_counts() const { return year_counts_; }

  // Connected components of the bipartite company/year graph.
  std::size_t components() const { return components_; }

 private:
  std::vector<PanelRecord> records_;
  std::vector<std::string> companies_;
  std::vector<int> years_;
  std::vector<std::size_t> company_idx_;
  std::vector<std::size_t> year_idx_;
  std::vector<std::size_t> company_counts_;
  std::vector<std::size_t> year_counts_;
  std::size_t components_ = 0;
};

enum class PanelModel { pooled, fe_individual, fe_time, fe_twoway, re_individual };

// CLI spellings: pooled, fe-i, fe-t, fe-2w, re-i.
PanelModel parse_panel_model(std::string_view text);
std::string_view to_string(PanelModel model);

struct PanelFit {
  PanelModel model = PanelModel::pooled;
  double a0 = 0.0;
  std::array<double, kRegressors> b{};
  std::array<double, kRegressors + 1> std_errors{};  // a0, b1..b3
  std::array<double, kRegressors + 1> p_values{};
  Eigen::Matrix3d slope_cov = Eigen::Matrix3d::Zero();

  // Effects under record-count weighted zero-sum constraints (fixed effects)
  // or as BLUPs (random effects).
  std::map<std::string, double> mu;
  std::map<int, double> gamma;

  std::vector<double> residuals;  // per record, input order
  double rss = 0.0;
  double r2 = 0.0;  // overall R^2, absorbed effects included
  std::size_t df_resid = 0;
  std::size_t absorbed = 0;  // effect parameters beyond the intercept

  double sigma2_mu = 0.0;  // random effects only
  double sigma2_eps = 0.0;
  std::size_t demean_sweeps = 0;
  std::vector<std::string> warnings;
};

struct FitOptions {
  double demean_tol = 1e-10;
  std::size_t max_sweeps = 10000;
};

PanelFit fit(const PanelDataset& panel, PanelModel model, const FitOptions& options = {});

// Removes company and year means from every column by alternating
// projections until the largest remaining company mean is below tol.
// Returns the number of sweeps used.
std::size_t demean_twoway(const PanelDataset& panel, Eigen::MatrixXd& columns,
                          double tol = 1e-10, std::size_t max_sweeps = 10000);

struct FTest {
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
};

struct ChiSquaredTest {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  bool non_positive_definite = false;  // Hausman only
};

struct SerialCorrelationTest {
  double rho_hat = 0.0;
  double t_statistic = 0.0;
  double p_value = 1.0;
  std::size_t pairs = 0;
};

struct SelectionReport {
  FTest f_fe;
  ChiSquaredTest lr_fe;
  ChiSquaredTest hausman;
  SerialCorrelationTest wooldridge;
};

FTest poolability_f(double rss_pooled, double rss_fe, std::size_t q, std::size_t df_fe);
ChiSquaredTest poolability_lr(double rss_pooled, double rss_fe, std::size_t n,
                              std::size_t q);
ChiSquaredTest hausman(const PanelFit& fe, const PanelFit& re);

// AR(1) check on pooled OLS residuals: e_it on e_i,t-1 over consecutive
// years, company-clustered standard errors.
SerialCorrelationTest residual_ar1(const PanelDataset& panel, const PanelFit& pooled);

SelectionReport select_model(const PanelDataset& panel, const FitOptions& options = {});

// ln Y_hat = a0 + mu_i + gamma_t + b'ln x, per record of `panel`.
std::vector<double> theoretical_price(const PanelFit& fit, const PanelDataset& panel);

// ln Y_tilde = ln Y_hat - gamma_t.
std::vector<double> fundamentals(const PanelFit& fit, const PanelDataset& panel);

}  // namespace zipfkit
