#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace vlgc {

/**
 * Result of one least-squares fit of y(t) on an intercept and lagged
 * regressors. Every fit built with the same lag order uses the rows
 * t = max_lag .. T-1 (0-based), so residual vectors of competing models are
 * aligned element by element.
 *
 * Coefficient layout: [intercept, block 1 lags 1..p, block 2 lags 1..p, ...].
 */
struct RegressionFit {
  Eigen::VectorXd coefficients;
  std::vector<double> residuals;
  double rss = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_params = 0;
  std::size_t rank = 0;
  bool rank_deficient = false;
};

/// y on its own lags 1..max_lag.
[[nodiscard]] RegressionFit fit_ar(std::span<const double> y, std::size_t max_lag);

/// y on its own lags and lags 1..max_lag of x.
[[nodiscard]] RegressionFit fit_arx(std::span<const double> y, std::span<const double> x, std::size_t max_lag);

/**
 * y on its own lags and the reconstructed cause. The i-th reconstructed lag is
 * xdtw(t - i + 1): reconstructed samples already carry their alignment delay,
 * so lag 1 is xdtw(t) = x(t - delay_t). A reconstruction with unit delay
 * everywhere therefore reproduces fit_arx exactly.
 */
[[nodiscard]] RegressionFit fit_vl(std::span<const double> y, std::span<const double> xdtw, std::size_t max_lag);

/// Encompassing design: y lags, x lags and reconstructed lags together.
[[nodiscard]] RegressionFit fit_vl_full(std::span<const double> y, std::span<const double> x,
                                        std::span<const double> xdtw, std::size_t max_lag);

/// Minimum-norm least squares on an explicit design; rejects n_obs <= n_params.
[[nodiscard]] RegressionFit fit_ols(const Eigen::MatrixXd& design, const Eigen::VectorXd& target);

/// Gaussian-likelihood BIC, n ln(rss/n) + k ln n; -infinity for a perfect fit.
[[nodiscard]] double bic(const RegressionFit& fit);

struct ModelComparison {
  double bic_restricted = 0.0;
  double bic_full = 0.0;
  double f_statistic = 0.0;
  double p_value = 1.0;
  bool significant = false;
};

/// Upper-tail probability of the F(df1, df2) distribution at `f`.
[[nodiscard]] double f_upper_tail(double f, double df1, double df2);

/**
 * Nested-model comparison. `significant` requires the full model to win on
 * BIC and, when `use_f_test` is set, the F-test at level `alpha` as well.
 *
 * @throws InvalidInput when the models are not nested by size, use different
 *         rows, or leave no residual degrees of freedom.
 */
[[nodiscard]] ModelComparison compare_nested(const RegressionFit& restricted, const RegressionFit& full,
                                             double alpha, bool use_f_test);

}  // namespace vlgc
