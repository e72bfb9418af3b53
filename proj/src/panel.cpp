#include "zipfkit/panel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "zipfkit/error.hpp"

namespace zipfkit {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
  while (parent[i] != i) {
    parent[i] = parent[parent[i]];
    i = parent[i];
  }
  return i;
}

double t_pvalue(double coef, double se, double df) {
  if (!(se > 0.0)) return coef == 0.0 ? 1.0 : 0.0;
  const double t = std::abs(coef / se);
  if (!std::isfinite(t)) return 0.0;
  boost::math::students_t dist(df);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

double chi2_upper(double x, double df) {
  if (!(x > 0.0)) return 1.0;
  if (!std::isfinite(x)) return 0.0;
  boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, x));
}

// Least squares through Householder QR with column pivoting.
struct LeastSquares {
  VectorXd coef;
  VectorXd resid;
  MatrixXd xtx_inv;
  double rss = 0.0;
};

LeastSquares solve_ls(const MatrixXd& x, const VectorXd& y) {
  Eigen::ColPivHouseholderQR<MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) throw Error("collinear regressors");
  LeastSquares out;
  out.coef = qr.solve(y);
  out.resid = y - x * out.coef;
  out.rss = out.resid.squaredNorm();
  const MatrixXd xtx = x.transpose() * x;
  out.xtx_inv = xtx.ldlt().solve(MatrixXd::Identity(x.cols(), x.cols()));
  return out;
}

MatrixXd regressor_matrix(const PanelDataset& panel) {
  MatrixXd x(static_cast<Eigen::Index>(panel.size()), kRegressors);
  for (std::size_t r = 0; r < panel.size(); ++r) {
    for (std::size_t k = 0; k < kRegressors; ++k) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          panel.records()[r].ln_x[k];
    }
  }
  return x;
}

VectorXd response_vector(const PanelDataset& panel) {
  VectorXd y(static_cast<Eigen::Index>(panel.size()));
  for (std::size_t r = 0; r < panel.size(); ++r) {
    y(static_cast<Eigen::Index>(r)) = panel.records()[r].ln_y;
  }
  return y;
}

enum class Grouping { company, year };

std::size_t group_of(const PanelDataset& panel, Grouping g, std::size_t r) {
  return g == Grouping::company ? panel.company_of(r) : panel.year_of(r);
}

const std::vector<std::size_t>& group_counts(const PanelDataset& panel, Grouping g) {
  return g == Grouping::company ? panel.company_counts() : panel.year_counts();
}

// Group means of every column: rows are groups.
MatrixXd group_means(const PanelDataset& panel, Grouping g, const MatrixXd& columns) {
  const auto& counts = group_counts(panel, g);
  MatrixXd sums = MatrixXd::Zero(static_cast<Eigen::Index>(counts.size()), columns.cols());
  for (std::size_t r = 0; r < panel.size(); ++r) {
    sums.row(static_cast<Eigen::Index>(group_of(panel, g, r))) +=
        columns.row(static_cast<Eigen::Index>(r));
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    sums.row(static_cast<Eigen::Index>(i)) /= static_cast<double>(counts[i]);
  }
  return sums;
}

// Subtracts group means in place; returns the largest absolute mean removed.
double demean_by(const PanelDataset& panel, Grouping g, MatrixXd& columns) {
  const MatrixXd means = group_means(panel, g, columns);
  for (std::size_t r = 0; r < panel.size(); ++r) {
    columns.row(static_cast<Eigen::Index>(r)) -=
        means.row(static_cast<Eigen::Index>(group_of(panel, g, r)));
  }
  return means.size() == 0 ? 0.0 : means.cwiseAbs().maxCoeff();
}

void fill_coefficient_stats(PanelFit& fit, double sigma2, const Eigen::Vector3d& xbar,
                            std::size_t n, const MatrixXd& slope_xtx_inv) {
  fit.slope_cov = sigma2 * slope_xtx_inv;
  const double var_a0 = sigma2 / static_cast<double>(n) + xbar.dot(fit.slope_cov * xbar);
  fit.std_errors[0] = std::sqrt(std::max(0.0, var_a0));
  for (std::size_t k = 0; k < kRegressors; ++k) {
    const auto ki = static_cast<Eigen::Index>(k);
    fit.std_errors[k + 1] = std::sqrt(std::max(0.0, fit.slope_cov(ki, ki)));
  }
  const double df = static_cast<double>(fit.df_resid);
  fit.p_values[0] = t_pvalue(fit.a0, fit.std_errors[0], df);
  for (std::size_t k = 0; k < kRegressors; ++k) {
    fit.p_values[k + 1] = t_pvalue(fit.b[k], fit.std_errors[k + 1], df);
  }
}

void finish_residuals(PanelFit& fit, const PanelDataset& panel, const VectorXd& fitted) {
  const VectorXd y = response_vector(panel);
  fit.residuals.resize(panel.size());
  fit.rss = 0.0;
  for (std::size_t r = 0; r < panel.size(); ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    fit.residuals[r] = y(ri) - fitted(ri);
    fit.rss += fit.residuals[r] * fit.residuals[r];
  }
  const double tss = (y.array() - y.mean()).square().sum();
  fit.r2 = tss > 0.0 ? 1.0 - fit.rss / tss : 1.0;
}

std::size_t checked_df(std::size_t n, std::size_t used) {
  if (n <= used) throw Error("insufficient degrees of freedom");
  return n - used;
}

void collect_absorbed(const PanelDataset& panel, Grouping g, const MatrixXd& x,
                      std::vector<std::string>& warnings) {
  MatrixXd within = x;
  demean_by(panel, g, within);
  const auto& counts = group_counts(panel, g);
  std::vector<double> spread(counts.size(), 0.0);
  for (std::size_t r = 0; r < panel.size(); ++r) {
    auto& s = spread[group_of(panel, g, r)];
    s = std::max(s, within.row(static_cast<Eigen::Index>(r)).cwiseAbs().maxCoeff());
  }
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (spread[i] > 1e-12) continue;
    if (g == Grouping::company) {
      warnings.push_back("company '" + panel.companies()[i] +
                         "' absorbed: regressors constant within company");
    } else {
      warnings.push_back("year " + std::to_string(panel.years()[i]) +
                         " absorbed: regressors constant within year");
    }
  }
}

PanelFit fit_pooled(const PanelDataset& panel) {
  const auto n = panel.size();
  MatrixXd design(static_cast<Eigen::Index>(n), kRegressors + 1);
  design.col(0).setOnes();
  design.rightCols(kRegressors) = regressor_matrix(panel);
  const VectorXd y = response_vector(panel);
  const auto ls = solve_ls(design, y);

  PanelFit fit;
  fit.model = PanelModel::pooled;
  fit.a0 = ls.coef(0);
  for (std::size_t k = 0; k < kRegressors; ++k) fit.b[k] = ls.coef(static_cast<Eigen::Index>(k + 1));
  fit.df_resid = checked_df(n, kRegressors + 1);
  const double sigma2 = ls.rss / static_cast<double>(fit.df_resid);
  const MatrixXd cov = sigma2 * ls.xtx_inv;
  fit.slope_cov = cov.bottomRightCorner(kRegressors, kRegressors);
  for (std::size_t k = 0; k <= kRegressors; ++k) {
    const auto ki = static_cast<Eigen::Index>(k);
    fit.std_errors[k] = std::sqrt(std::max(0.0, cov(ki, ki)));
    fit.p_values[k] = t_pvalue(ls.coef(ki), fit.std_errors[k], static_cast<double>(fit.df_resid));
  }
  finish_residuals(fit, panel, design * ls.coef);
  return fit;
}

PanelFit fit_fixed(const PanelDataset& panel, PanelModel model, const FitOptions& options) {
  const auto n = panel.size();
  const auto n_comp = panel.companies().size();
  const auto n_year = panel.years().size();
  const bool by_company = model != PanelModel::fe_time;
  const bool by_year = model != PanelModel::fe_individual;
  if (by_company && n_comp < 2) throw Error("fixed effects need at least two companies");
  if (by_year && n_year < 2) throw Error("time effects need at least two years");

  const MatrixXd x = regressor_matrix(panel);
  const VectorXd y = response_vector(panel);
  MatrixXd data(static_cast<Eigen::Index>(n), kRegressors + 1);
  data.col(0) = y;
  data.rightCols(kRegressors) = x;

  PanelFit fit;
  fit.model = model;
  if (by_company && by_year) {
    fit.demean_sweeps = demean_twoway(panel, data, options.demean_tol, options.max_sweeps);
    fit.absorbed = n_comp + n_year - panel.components() - 1;
  } else {
    demean_by(panel, by_company ? Grouping::company : Grouping::year, data);
    fit.demean_sweeps = 1;
    fit.absorbed = by_company ? n_comp - 1 : n_year - 1;
  }
  if (by_company) collect_absorbed(panel, Grouping::company, x, fit.warnings);
  if (by_year) collect_absorbed(panel, Grouping::year, x, fit.warnings);

  const MatrixXd x_within = data.rightCols(kRegressors);
  const auto ls = solve_ls(x_within, data.col(0));
  for (std::size_t k = 0; k < kRegressors; ++k) fit.b[k] = ls.coef(static_cast<Eigen::Index>(k));
  const Eigen::Vector3d b(fit.b[0], fit.b[1], fit.b[2]);

  // Grand-mean intercept: the effects sum to zero with record-count weights.
  const Eigen::Vector3d xbar = x.colwise().mean().transpose();
  fit.a0 = y.mean() - xbar.dot(b);

  // Effect part of each record: y - a0 - x'b - e = mu_i + gamma_t.
  const VectorXd effect = y.array() - fit.a0 - (x * b).array() - ls.resid.array();
  std::vector<double> mu(n_comp, 0.0);
  std::vector<double> gamma(n_year, 0.0);
  auto update = [&](Grouping g, std::vector<double>& target, const std::vector<double>& other) {
    const auto& counts = group_counts(panel, g);
    std::vector<double> sums(counts.size(), 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const double o = other.empty() ? 0.0
                                     : other[g == Grouping::company ? panel.year_of(r)
                                                                    : panel.company_of(r)];
      sums[group_of(panel, g, r)] += effect(static_cast<Eigen::Index>(r)) - o;
    }
    double change = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double v = sums[i] / static_cast<double>(counts[i]);
      change = std::max(change, std::abs(v - target[i]));
      target[i] = v;
    }
    return change;
  };
  if (by_company && by_year) {
    std::size_t sweep = 0;
    for (; sweep < options.max_sweeps; ++sweep) {
      const double c1 = update(Grouping::company, mu, gamma);
      const double c2 = update(Grouping::year, gamma, mu);
      if (std::max(c1, c2) < options.demean_tol) break;
    }
    if (sweep == options.max_sweeps) throw Error("effect recovery did not converge");
  } else if (by_company) {
    update(Grouping::company, mu, {});
  } else {
    update(Grouping::year, gamma, {});
  }
  if (by_company) {
    for (std::size_t i = 0; i < n_comp; ++i) fit.mu[panel.companies()[i]] = mu[i];
  }
  if (by_year) {
    for (std::size_t t = 0; t < n_year; ++t) fit.gamma[panel.years()[t]] = gamma[t];
  }

  fit.df_resid = checked_df(n, fit.absorbed + kRegressors + 1);
  const double sigma2 = ls.rss / static_cast<double>(fit.df_resid);
  fill_coefficient_stats(fit, sigma2, xbar, n, ls.xtx_inv);

  VectorXd fitted = VectorXd::Constant(static_cast<Eigen::Index>(n), fit.a0) + x * b;
  for (std::size_t r = 0; r < n; ++r) {
    fitted(static_cast<Eigen::Index>(r)) += mu[panel.company_of(r)] + gamma[panel.year_of(r)];
  }
  finish_residuals(fit, panel, fitted);
  return fit;
}

// Swamy-Arora one-way random effects.
PanelFit fit_random(const PanelDataset& panel, const FitOptions& options) {
  const auto n = panel.size();
  const auto n_comp = panel.companies().size();
  if (n_comp <= kRegressors + 1) {
    throw Error("random effects need more companies than between-regression parameters");
  }
  const PanelFit within = fit_fixed(panel, PanelModel::fe_individual, options);
  const double sigma2_eps = within.rss / static_cast<double>(within.df_resid);

  const MatrixXd x = regressor_matrix(panel);
  const VectorXd y = response_vector(panel);
  MatrixXd data(static_cast<Eigen::Index>(n), kRegressors + 1);
  data.col(0) = y;
  data.rightCols(kRegressors) = x;
  const MatrixXd means = group_means(panel, Grouping::company, data);

  MatrixXd between(static_cast<Eigen::Index>(n_comp), kRegressors + 1);
  between.col(0).setOnes();
  between.rightCols(kRegressors) = means.rightCols(kRegressors);
  const auto bls = solve_ls(between, means.col(0));
  double inv_t = 0.0;
  for (auto c : panel.company_counts()) inv_t += 1.0 / static_cast<double>(c);
  inv_t /= static_cast<double>(n_comp);
  const double sigma2_between =
      bls.rss / static_cast<double>(n_comp - kRegressors - 1);
  const double sigma2_mu = std::max(0.0, sigma2_between - sigma2_eps * inv_t);

  std::vector<double> theta(n_comp, 0.0);
  if (sigma2_mu > 0.0) {
    for (std::size_t i = 0; i < n_comp; ++i) {
      const double t_i = static_cast<double>(panel.company_counts()[i]);
      theta[i] = 1.0 - std::sqrt(sigma2_eps / (t_i * sigma2_mu + sigma2_eps));
    }
  }

  MatrixXd design(static_cast<Eigen::Index>(n), kRegressors + 1);
  VectorXd y_star(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto ri = static_cast<Eigen::Index>(r);
    const auto ci = static_cast<Eigen::Index>(panel.company_of(r));
    const double th = theta[panel.company_of(r)];
    design(ri, 0) = 1.0 - th;
    design.row(ri).tail(kRegressors) = x.row(ri) - th * means.row(ci).tail(kRegressors);
    y_star(ri) = y(ri) - th * means(ci, 0);
  }
  const auto ls = solve_ls(design, y_star);

  PanelFit fit;
  fit.model = PanelModel::re_individual;
  fit.sigma2_eps = sigma2_eps;
  fit.sigma2_mu = sigma2_mu;
  fit.a0 = ls.coef(0);
  for (std::size_t k = 0; k < kRegressors; ++k) fit.b[k] = ls.coef(static_cast<Eigen::Index>(k + 1));
  fit.df_resid = checked_df(n, kRegressors + 1);
  // Transformed errors have variance sigma2_eps under the model; sharing it
  // with the within fit keeps V_fe - V_re comparable in the Hausman test.
  const MatrixXd cov = sigma2_eps * ls.xtx_inv;
  fit.slope_cov = cov.bottomRightCorner(kRegressors, kRegressors);
  for (std::size_t k = 0; k <= kRegressors; ++k) {
    const auto ki = static_cast<Eigen::Index>(k);
    fit.std_errors[k] = std::sqrt(std::max(0.0, cov(ki, ki)));
    fit.p_values[k] = t_pvalue(ls.coef(ki), fit.std_errors[k], static_cast<double>(fit.df_resid));
  }

  const Eigen::Vector3d b(fit.b[0], fit.b[1], fit.b[2]);
  const VectorXd composite = y.array() - fit.a0 - (x * b).array();
  std::vector<double> mean_composite(n_comp, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    mean_composite[panel.company_of(r)] += composite(static_cast<Eigen::Index>(r));
  }
  std::vector<double> mu(n_comp, 0.0);
  for (std::size_t i = 0; i < n_comp; ++i) {
    const double t_i = static_cast<double>(panel.company_counts()[i]);
    mean_composite[i] /= t_i;
    const double shrink = sigma2_mu > 0.0 ? t_i * sigma2_mu / (t_i * sigma2_mu + sigma2_eps) : 0.0;
    mu[i] = shrink * mean_composite[i];
    fit.mu[panel.companies()[i]] = mu[i];
  }
  VectorXd fitted = VectorXd::Constant(static_cast<Eigen::Index>(n), fit.a0) + x * b;
  for (std::size_t r = 0; r < n; ++r) fitted(static_cast<Eigen::Index>(r)) += mu[panel.company_of(r)];
  finish_residuals(fit, panel, fitted);
  return fit;
}

std::vector<double> linear_prediction(const PanelFit& fit, const PanelDataset& panel,
                                      bool with_time_effect) {
  if (fit.model != PanelModel::fe_twoway) {
    throw Error("theoretical price requires a two-way fixed effects fit");
  }
  std::vector<double> out(panel.size());
  for (std::size_t r = 0; r < panel.size(); ++r) {
    const auto& rec = panel.records()[r];
    const auto mu = fit.mu.find(rec.company);
    const auto gamma = fit.gamma.find(rec.year);
    if (mu == fit.mu.end() || gamma == fit.gamma.end()) throw Error("unseen entity");
    double v = fit.a0 + mu->second;
    if (with_time_effect) v += gamma->second;
    for (std::size_t k = 0; k < kRegressors; ++k) v += fit.b[k] * rec.ln_x[k];
    out[r] = v;
  }
  return out;
}

}  // namespace

PanelDataset::PanelDataset(std::vector<PanelRecord> records) : records_(std::move(records)) {
  if (records_.empty()) throw Error("empty panel");
  std::set<std::pair<std::string_view, int>> keys;
  std::map<std::string, std::size_t> company_index;
  std::map<int, std::size_t> year_index;
  for (const auto& rec : records_) {
    if (!std::isfinite(rec.ln_y) ||
        !std::all_of(rec.ln_x.begin(), rec.ln_x.end(), [](double v) { return std::isfinite(v); })) {
      throw Error("non-finite panel value for company '" + rec.company + "' year " +
                  std::to_string(rec.year));
    }
    if (!keys.emplace(rec.company, rec.year).second) {
      throw Error("duplicate (company, year): '" + rec.company + "', " + std::to_string(rec.year));
    }
    company_index.emplace(rec.company, 0);
    year_index.emplace(rec.year, 0);
  }
  for (auto& [name, idx] : company_index) {
    idx = companies_.size();
    companies_.push_back(name);
  }
  for (auto& [year, idx] : year_index) {
    idx = years_.size();
    years_.push_back(year);
  }
  company_counts_.assign(companies_.size(), 0);
  year_counts_.assign(years_.size(), 0);
  company_idx_.reserve(records_.size());
  year_idx_.reserve(records_.size());
  std::vector<std::size_t> parent(companies_.size() + years_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  for (const auto& rec : records_) {
    const auto c = company_index[rec.company];
    const auto t = year_index[rec.year];
    company_idx_.push_back(c);
    year_idx_.push_back(t);
    ++company_counts_[c];
    ++year_counts_[t];
    parent[find_root(parent, c)] = find_root(parent, companies_.size() + t);
  }
  for (std::size_t i = 0; i < parent.size(); ++i) components_ += find_root(parent, i) == i;
}

PanelModel parse_panel_model(std::string_view text) {
  if (text == "pooled") return PanelModel::pooled;
  if (text == "fe-i") return PanelModel::fe_individual;
  if (text == "fe-t") return PanelModel::fe_time;
  if (text == "fe-2w") return PanelModel::fe_twoway;
  if (text == "re-i") return PanelModel::re_individual;
  throw Error("unknown panel model '" + std::string(text) +
              "' (expected pooled, fe-i, fe-t, fe-2w or re-i)");
}

std::string_view to_string(PanelModel model) {
  switch (model) {
    case PanelModel::pooled: return "pooled";
    case PanelModel::fe_individual: return "fe-i";
    case PanelModel::fe_time: return "fe-t";
    case PanelModel::fe_twoway: return "fe-2w";
    case PanelModel::re_individual: return "re-i";
  }
  return "unknown";
}

std::size_t demean_twoway(const PanelDataset& panel, MatrixXd& columns, double tol,
                          std::size_t max_sweeps) {
  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    demean_by(panel, Grouping::company, columns);
    demean_by(panel, Grouping::year, columns);
    // Year means are now exactly removed; the sweep has converged once the
    // year step no longer disturbs the company means.
    const MatrixXd residual_means = group_means(panel, Grouping::company, columns);
    if (residual_means.cwiseAbs().maxCoeff() < tol) return sweep;
  }
  throw Error("two-way demeaning did not converge");
}

PanelFit fit(const PanelDataset& panel, PanelModel model, const FitOptions& options) {
  if (panel.size() < 10) throw Error("panel needs at least 10 records");
  switch (model) {
    case PanelModel::pooled: return fit_pooled(panel);
    case PanelModel::fe_individual:
    case PanelModel::fe_time:
    case PanelModel::fe_twoway: return fit_fixed(panel, model, options);
    case PanelModel::re_individual: return fit_random(panel, options);
  }
  throw Error("unknown panel model");
}

FTest poolability_f(double rss_pooled, double rss_fe, std::size_t q, std::size_t df_fe) {
  if (q == 0 || df_fe == 0) throw Error("F test needs positive degrees of freedom");
  FTest out;
  out.df1 = static_cast<double>(q);
  out.df2 = static_cast<double>(df_fe);
  if (rss_fe <= 0.0) {
    out.statistic = rss_pooled > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    out.p_value = rss_pooled > 0.0 ? 0.0 : 1.0;
    return out;
  }
  out.statistic = std::max(0.0, ((rss_pooled - rss_fe) / out.df1) / (rss_fe / out.df2));
  if (out.statistic > 0.0) {
    boost::math::fisher_f dist(out.df1, out.df2);
    out.p_value = boost::math::cdf(boost::math::complement(dist, out.statistic));
  }
  return out;
}

ChiSquaredTest poolability_lr(double rss_pooled, double rss_fe, std::size_t n, std::size_t q) {
  if (q == 0) throw Error("LR test needs positive degrees of freedom");
  ChiSquaredTest out;
  out.df = static_cast<double>(q);
  if (rss_fe <= 0.0) {
    out.statistic = rss_pooled > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  } else {
    out.statistic = std::max(0.0, static_cast<double>(n) * std::log(rss_pooled / rss_fe));
  }
  out.p_value = chi2_upper(out.statistic, out.df);
  return out;
}

ChiSquaredTest hausman(const PanelFit& fe, const PanelFit& re) {
  const Eigen::Vector3d d(fe.b[0] - re.b[0], fe.b[1] - re.b[1], fe.b[2] - re.b[2]);
  const Eigen::Matrix3d dv = fe.slope_cov - re.slope_cov;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(dv);
  const auto& values = eig.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();
  const double cutoff = scale * 1e-12;

  ChiSquaredTest out;
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values(k) > cutoff) {
      const double proj = eig.eigenvectors().col(k).dot(d);
      out.statistic += proj * proj / values(k);
      out.df += 1.0;
    } else {
      out.non_positive_definite = true;
    }
  }
  out.p_value = out.df > 0.0 ? chi2_upper(out.statistic, out.df) : 1.0;
  return out;
}

SerialCorrelationTest residual_ar1(const PanelDataset& panel, const PanelFit& pooled) {
  if (pooled.residuals.size() != panel.size()) throw Error("fit/panel mismatch");
  std::vector<std::vector<std::size_t>> by_company(panel.companies().size());
  for (std::size_t r = 0; r < panel.size(); ++r) by_company[panel.company_of(r)].push_back(r);

  std::vector<double> current;
  std::vector<double> lagged;
  std::vector<std::size_t> cluster;
  for (std::size_t c = 0; c < by_company.size(); ++c) {
    auto& rows = by_company[c];
    std::sort(rows.begin(), rows.end(), [&](std::size_t a, std::size_t b) {
      return panel.records()[a].year < panel.records()[b].year;
    });
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (panel.records()[rows[k]].year != panel.records()[rows[k - 1]].year + 1) continue;
      current.push_back(pooled.residuals[rows[k]]);
      lagged.push_back(pooled.residuals[rows[k - 1]]);
      cluster.push_back(c);
    }
  }
  const auto m = current.size();
  std::set<std::size_t> clusters(cluster.begin(), cluster.end());
  if (m < 3 || clusters.size() < 2) throw Error("insufficient consecutive observations");

  MatrixXd z(static_cast<Eigen::Index>(m), 2);
  VectorXd e(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    z(static_cast<Eigen::Index>(i), 0) = 1.0;
    z(static_cast<Eigen::Index>(i), 1) = lagged[i];
    e(static_cast<Eigen::Index>(i)) = current[i];
  }
  const auto ls = solve_ls(z, e);

  Eigen::Matrix2d meat = Eigen::Matrix2d::Zero();
  Eigen::Vector2d score = Eigen::Vector2d::Zero();
  for (std::size_t i = 0; i < m; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    score += z.row(ii).transpose() * ls.resid(ii);
    if (i + 1 == m || cluster[i + 1] != cluster[i]) {
      meat += score * score.transpose();
      score.setZero();
    }
  }
  const double g = static_cast<double>(clusters.size());
  const double mm = static_cast<double>(m);
  const double correction = g / (g - 1.0) * (mm - 1.0) / (mm - 2.0);
  const Eigen::Matrix2d cov = correction * ls.xtx_inv * meat * ls.xtx_inv;

  SerialCorrelationTest out;
  out.pairs = m;
  out.rho_hat = ls.coef(1);
  const double se = std::sqrt(std::max(0.0, cov(1, 1)));
  out.t_statistic = se > 0.0 ? out.rho_hat / se : 0.0;
  out.p_value = t_pvalue(out.rho_hat, se, g - 1.0);
  return out;
}

SelectionReport select_model(const PanelDataset& panel, const FitOptions& options) {
  const auto pooled = fit(panel, PanelModel::pooled, options);
  const auto twoway = fit(panel, PanelModel::fe_twoway, options);
  const auto within = fit(panel, PanelModel::fe_individual, options);
  const auto random = fit(panel, PanelModel::re_individual, options);

  SelectionReport report;
  report.f_fe = poolability_f(pooled.rss, twoway.rss, twoway.absorbed, twoway.df_resid);
  report.lr_fe = poolability_lr(pooled.rss, twoway.rss, panel.size(), twoway.absorbed);
  report.hausman = hausman(within, random);
  report.wooldridge = residual_ar1(panel, pooled);
  return report;
}

std::vector<double> theoretical_price(const PanelFit& fit, const PanelDataset& panel) {
  return linear_prediction(fit, panel, true);
}

std::vector<double> fundamentals(const PanelFit& fit, const PanelDataset& panel) {
  return linear_prediction(fit, panel, false);
}

}  // namespace zipfkit
