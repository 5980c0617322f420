#include "vlgc/regression.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/distributions/fisher_f.hpp>

#include "vlgc/core.hpp"

namespace vlgc {

namespace {

/// A lagged regressor block: the value used for lag i at row t is series[t - i + lead].
struct LagBlock {
  std::span<const double> series;
  std::size_t lead = 0;
};

RegressionFit fit_lagged(std::span<const double> y, std::initializer_list<LagBlock> blocks, std::size_t max_lag) {
  if (max_lag < 1) throw InvalidInput("max_lag must be at least 1");
  const std::size_t len = y.size();
  for (const auto& b : blocks) {
    if (b.series.size() != len) throw InvalidInput("regressors must have the same length as the target");
  }
  if (len <= 2 * max_lag) {
    throw InvalidInput("series of length " + std::to_string(len) + " is too short for max_lag " +
                       std::to_string(max_lag));
  }
  const std::size_t rows = len - max_lag;
  const std::size_t cols = 1 + max_lag * (1 + blocks.size());
  Eigen::MatrixXd design(rows, cols);
  Eigen::VectorXd target(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::size_t t = r + max_lag;
    target(r) = y[t];
    design(r, 0) = 1.0;
    std::size_t c = 1;
    for (std::size_t i = 1; i <= max_lag; ++i) design(r, c++) = y[t - i];
    for (const auto& b : blocks) {
      for (std::size_t i = 1; i <= max_lag; ++i) design(r, c++) = b.series[t - i + b.lead];
    }
  }
  return fit_ols(design, target);
}

}  // namespace

RegressionFit fit_ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& target) {
  const auto n = static_cast<std::size_t>(design.rows());
  const auto k = static_cast<std::size_t>(design.cols());
  if (static_cast<std::size_t>(target.size()) != n) throw InvalidInput("design and target row counts differ");
  if (n <= k) {
    throw InvalidInput("regression with " + std::to_string(k) + " parameters needs more than " + std::to_string(n) +
                       " observations");
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(design);
  RegressionFit fit;
  fit.coefficients = cod.solve(target);
  const Eigen::VectorXd resid = target - design * fit.coefficients;
  fit.residuals.assign(resid.data(), resid.data() + resid.size());
  fit.rss = resid.squaredNorm();
  fit.n_obs = n;
  fit.n_params = k;
  fit.rank = static_cast<std::size_t>(cod.rank());
  fit.rank_deficient = fit.rank < k;
  return fit;
}

RegressionFit fit_ar(std::span<const double> y, std::size_t max_lag) { return fit_lagged(y, {}, max_lag); }

RegressionFit fit_arx(std::span<const double> y, std::span<const double> x, std::size_t max_lag) {
  return fit_lagged(y, {LagBlock{x, 0}}, max_lag);
}

RegressionFit fit_vl(std::span<const double> y, std::span<const double> xdtw, std::size_t max_lag) {
  return fit_lagged(y, {LagBlock{xdtw, 1}}, max_lag);
}

RegressionFit fit_vl_full(std::span<const double> y, std::span<const double> x, std::span<const double> xdtw,
                          std::size_t max_lag) {
  return fit_lagged(y, {LagBlock{x, 0}, LagBlock{xdtw, 1}}, max_lag);
}

double bic(const RegressionFit& fit) {
  if (fit.n_obs == 0) throw InvalidInput("BIC of an empty fit");
  const double n = static_cast<double>(fit.n_obs);
  if (!(fit.rss > 0.0)) return -std::numeric_limits<double>::infinity();
  return n * std::log(fit.rss / n) + static_cast<double>(fit.n_params) * std::log(n);
}

double f_upper_tail(double f, double df1, double df2) {
  if (!(df1 > 0.0) || !(df2 > 0.0)) throw InvalidInput("F distribution needs positive degrees of freedom");
  if (std::isnan(f)) throw InvalidInput("F statistic is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const boost::math::fisher_f dist(df1, df2);
  return boost::math::cdf(boost::math::complement(dist, f));
}

ModelComparison compare_nested(const RegressionFit& restricted, const RegressionFit& full, double alpha,
                               bool use_f_test) {
  if (full.n_obs != restricted.n_obs) throw InvalidInput("nested models must share their observations");
  if (full.n_params <= restricted.n_params) throw InvalidInput("full model must have more parameters");
  if (full.n_obs <= full.n_params) throw InvalidInput("full model has no residual degrees of freedom");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");

  ModelComparison out;
  out.bic_restricted = bic(restricted);
  out.bic_full = bic(full);
  const double df1 = static_cast<double>(full.n_params - restricted.n_params);
  const double df2 = static_cast<double>(full.n_obs - full.n_params);
  const double gain = std::max(restricted.rss - full.rss, 0.0);
  if (full.rss > 0.0) {
    out.f_statistic = (gain / df1) / (full.rss / df2);
  } else {
    out.f_statistic = gain > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  out.p_value = f_upper_tail(out.f_statistic, df1, df2);
  const bool bic_win = out.bic_full < out.bic_restricted;
  out.significant = bic_win && (!use_f_test || out.p_value < alpha);
  return out;
}

}  // namespace vlgc
