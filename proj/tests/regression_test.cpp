#include <gtest/gtest.h>

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_linalg.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "vlgc/core.hpp"
#include "vlgc/regression.hpp"

using vlgc::InvalidInput;
using vlgc::RegressionFit;

namespace {

using Column = std::function<double(std::size_t t)>;

std::vector<double> gaussian(std::size_t n, std::mt19937_64& engine) {
  std::normal_distribution<double> draw;
  std::vector<double> v(n);
  for (double& a : v) a = draw(engine);
  return v;
}

/// Solves the normal equations with a GSL Cholesky factorisation.
std::vector<double> normal_equations(const std::vector<Column>& columns, const std::vector<double>& target,
                                     std::size_t first_row) {
  const std::size_t k = columns.size() + 1;
  gsl_matrix* gram = gsl_matrix_calloc(k, k);
  gsl_vector* rhs = gsl_vector_calloc(k);
  for (std::size_t t = first_row; t < target.size(); ++t) {
    std::vector<double> row{1.0};
    for (const auto& c : columns) row.push_back(c(t));
    for (std::size_t a = 0; a < k; ++a) {
      *gsl_vector_ptr(rhs, a) += row[a] * target[t];
      for (std::size_t b = 0; b < k; ++b) *gsl_matrix_ptr(gram, a, b) += row[a] * row[b];
    }
  }
  gsl_linalg_cholesky_decomp1(gram);
  gsl_vector* beta = gsl_vector_alloc(k);
  gsl_linalg_cholesky_solve(gram, rhs, beta);
  std::vector<double> out(beta->data, beta->data + k);
  gsl_vector_free(beta);
  gsl_vector_free(rhs);
  gsl_matrix_free(gram);
  return out;
}

std::vector<Column> lags_of(const std::vector<double>& s, std::size_t p, std::size_t lead = 0) {
  std::vector<Column> cols;
  for (std::size_t i = 1; i <= p; ++i) cols.push_back([&s, i, lead](std::size_t t) { return s[t + lead - i]; });
  return cols;
}

void expect_coefficients(const RegressionFit& fit, const std::vector<double>& oracle, double tol) {
  ASSERT_EQ(static_cast<std::size_t>(fit.coefficients.size()), oracle.size());
  for (std::size_t i = 0; i < oracle.size(); ++i) EXPECT_NEAR(fit.coefficients[i], oracle[i], tol) << "coef " << i;
}

}  // namespace

TEST(FitAr, ConstantSeriesFitsExactly) {
  const std::vector<double> y(30, 5.0);
  for (std::size_t p : {1, 2, 5}) {
    const RegressionFit fit = vlgc::fit_ar(y, p);
    EXPECT_NEAR(fit.rss, 0.0, 1e-18);
    EXPECT_EQ(fit.n_obs, 30 - p);
    EXPECT_EQ(fit.n_params, p + 1);
  }
}

TEST(FitAr, RecoversExactRecursion) {
  std::vector<double> y{1.0};
  for (int t = 1; t < 40; ++t) y.push_back(0.5 * y.back());
  const RegressionFit fit = vlgc::fit_ar(y, 1);
  EXPECT_NEAR(fit.coefficients[1], 0.5, 1e-8);
  EXPECT_NEAR(fit.rss, 0.0, 1e-18);
}

TEST(FitAr, MatchesNormalEquations) {
  std::mt19937_64 engine(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = gaussian(80, engine);
    const RegressionFit fit = vlgc::fit_ar(y, 3);
    expect_coefficients(fit, normal_equations(lags_of(y, 3), y, 3), 1e-8);
    EXPECT_FALSE(fit.rank_deficient);
  }
}

TEST(FitAr, RejectsTooShortSeries) {
  EXPECT_THROW((void)vlgc::fit_ar(std::vector<double>{1, 2, 3}, 0), InvalidInput);
  EXPECT_THROW((void)vlgc::fit_ar(std::vector<double>{1, 2, 3}, 2), InvalidInput);
}

TEST(FitArx, ExactFixedLagCopy) {
  std::mt19937_64 engine(2);
  const auto x = gaussian(60, engine);
  std::vector<double> y(60, 0.0);
  for (std::size_t t = 2; t < 60; ++t) y[t] = x[t - 2];
  const RegressionFit fit = vlgc::fit_arx(y, x, 3);
  EXPECT_NEAR(fit.rss, 0.0, 1e-16);
  EXPECT_NEAR(fit.coefficients[1 + 3 + 1], 1.0, 1e-8);
}

TEST(FitArx, MatchesNormalEquations) {
  std::mt19937_64 engine(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = gaussian(90, engine);
    const auto x = gaussian(90, engine);
    auto cols = lags_of(y, 4);
    for (auto& c : lags_of(x, 4)) cols.push_back(c);
    expect_coefficients(vlgc::fit_arx(y, x, 4), normal_equations(cols, y, 4), 1e-8);
  }
}

TEST(FitArx, IndependentCauseRarelyImprovesBic) {
  std::mt19937_64 engine(4);
  int no_gain = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto y = gaussian(200, engine);
    const auto x = gaussian(200, engine);
    no_gain += vlgc::bic(vlgc::fit_arx(y, x, 3)) >= vlgc::bic(vlgc::fit_ar(y, 3));
  }
  EXPECT_GT(no_gain, 50);
}

TEST(FitVl, UnitDelayReconstructionReproducesArx) {
  std::mt19937_64 engine(5);
  const auto y = gaussian(70, engine);
  const auto x = gaussian(70, engine);
  std::vector<double> xdtw(70);
  xdtw[0] = x[0];
  for (std::size_t t = 1; t < 70; ++t) xdtw[t] = x[t - 1];
  const RegressionFit vl = vlgc::fit_vl(y, xdtw, 3);
  const RegressionFit arx = vlgc::fit_arx(y, x, 3);
  EXPECT_NEAR(vl.rss, arx.rss, 1e-10);
  for (Eigen::Index i = 0; i < vl.coefficients.size(); ++i) EXPECT_NEAR(vl.coefficients[i], arx.coefficients[i], 1e-10);
  for (std::size_t i = 0; i < vl.residuals.size(); ++i) EXPECT_NEAR(vl.residuals[i], arx.residuals[i], 1e-10);
}

TEST(FitVl, MatchesNormalEquations) {
  std::mt19937_64 engine(6);
  for (int trial = 0; trial < 20; ++trial) {
    const auto y = gaussian(90, engine);
    const auto r = gaussian(90, engine);
    auto cols = lags_of(y, 3);
    for (auto& c : lags_of(r, 3, 1)) cols.push_back(c);
    expect_coefficients(vlgc::fit_vl(y, r, 3), normal_equations(cols, y, 3), 1e-8);
  }
}

TEST(FitVlFull, MatchesNormalEquations) {
  std::mt19937_64 engine(7);
  const auto y = gaussian(120, engine);
  const auto x = gaussian(120, engine);
  const auto r = gaussian(120, engine);
  auto cols = lags_of(y, 2);
  for (auto& c : lags_of(x, 2)) cols.push_back(c);
  for (auto& c : lags_of(r, 2, 1)) cols.push_back(c);
  expect_coefficients(vlgc::fit_vl_full(y, x, r, 2), normal_equations(cols, y, 2), 1e-8);
}

TEST(FitOls, CollinearDesignIsFlaggedAndStillFits) {
  Eigen::MatrixXd design(6, 3);
  Eigen::VectorXd target(6);
  for (int i = 0; i < 6; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = i;
    design(i, 2) = 2.0 * i;
    target[i] = 1.0 + 3.0 * i;
  }
  const RegressionFit fit = vlgc::fit_ols(design, target);
  EXPECT_TRUE(fit.rank_deficient);
  EXPECT_EQ(fit.rank, 2u);
  EXPECT_NEAR(fit.rss, 0.0, 1e-18);
  // Minimum-norm split of the slope 3 across (1, 2).
  EXPECT_NEAR(fit.coefficients[1], 0.6, 1e-10);
  EXPECT_NEAR(fit.coefficients[2], 1.2, 1e-10);
  EXPECT_THROW((void)vlgc::fit_ols(design.topRows(3), target.head(3)), InvalidInput);
}

TEST(Bic, DirectFormulaAndPerfectFit) {
  RegressionFit fit;
  fit.n_obs = 100;
  fit.rss = 100.0;
  fit.n_params = 2;
  EXPECT_NEAR(vlgc::bic(fit), 2.0 * std::log(100.0), 1e-12);
  EXPECT_NEAR(vlgc::bic(fit), 9.2103403719761836, 1e-12);
  fit.rss = 0.0;
  EXPECT_EQ(vlgc::bic(fit), -std::numeric_limits<double>::infinity());
}

TEST(CompareNested, DirectFormula) {
  RegressionFit r;
  r.n_obs = 100;
  r.n_params = 2;
  r.rss = 200.0;
  RegressionFit f = r;
  f.n_params = 4;
  f.rss = 100.0;
  const auto c = vlgc::compare_nested(r, f, 0.01, true);
  EXPECT_NEAR(c.f_statistic, 48.0, 1e-12);
  EXPECT_NEAR(c.p_value, gsl_cdf_fdist_Q(48.0, 2, 96), 1e-12);
  EXPECT_TRUE(c.significant);
}

TEST(CompareNested, NoImprovement) {
  RegressionFit r;
  r.n_obs = 50;
  r.n_params = 2;
  r.rss = 10.0;
  RegressionFit f = r;
  f.n_params = 3;
  const auto c = vlgc::compare_nested(r, f, 0.05, true);
  EXPECT_EQ(c.f_statistic, 0.0);
  EXPECT_EQ(c.p_value, 1.0);
  EXPECT_FALSE(c.significant);
}

TEST(CompareNested, FTestGateOnlyNarrowsBic) {
  std::mt19937_64 engine(8);
  for (int trial = 0; trial < 50; ++trial) {
    const auto y = gaussian(60, engine);
    const auto x = gaussian(60, engine);
    const auto r = vlgc::fit_ar(y, 2);
    const auto f = vlgc::fit_arx(y, x, 2);
    const auto gated = vlgc::compare_nested(r, f, 0.05, true);
    const auto plain = vlgc::compare_nested(r, f, 0.05, false);
    EXPECT_EQ(plain.significant, plain.bic_full < plain.bic_restricted);
    if (gated.significant) EXPECT_TRUE(plain.significant);
  }
}

TEST(CompareNested, RejectsMismatchedModels) {
  RegressionFit r;
  r.n_obs = 10;
  r.n_params = 3;
  r.rss = 1.0;
  RegressionFit f = r;
  f.n_params = 2;
  EXPECT_THROW((void)vlgc::compare_nested(r, f, 0.05, true), InvalidInput);
  f.n_params = 10;
  EXPECT_THROW((void)vlgc::compare_nested(r, f, 0.05, true), InvalidInput);
  f.n_params = 4;
  f.n_obs = 9;
  EXPECT_THROW((void)vlgc::compare_nested(r, f, 0.05, true), InvalidInput);
}

TEST(FUpperTail, MatchesIncompleteBeta) {
  std::mt19937_64 engine(9);
  std::uniform_real_distribution<double> fval(0.01, 12.0);
  std::uniform_int_distribution<int> df(1, 150);
  for (int i = 0; i < 20; ++i) {
    const double f = fval(engine);
    const double d1 = df(engine);
    const double d2 = df(engine);
    EXPECT_NEAR(vlgc::f_upper_tail(f, d1, d2), gsl_cdf_fdist_Q(f, d1, d2), 1e-8) << f << " " << d1 << " " << d2;
  }
}

TEST(Regression, AffineRescalingLeavesTheComparisonUnchanged) {
  std::mt19937_64 engine(10);
  const auto y = gaussian(100, engine);
  auto x = gaussian(100, engine);
  for (std::size_t t = 1; t < 100; ++t) x[t] += 0.4 * y[t - 1];
  std::vector<double> y2(y), x2(x);
  for (double& v : y2) v = 3.0 * v - 7.0;
  for (double& v : x2) v = -0.5 * v + 2.0;
  const auto a = vlgc::compare_nested(vlgc::fit_ar(y, 2), vlgc::fit_arx(y, x, 2), 0.01, true);
  const auto b = vlgc::compare_nested(vlgc::fit_ar(y2, 2), vlgc::fit_arx(y2, x2, 2), 0.01, true);
  EXPECT_NEAR(a.f_statistic, b.f_statistic, 1e-8 * std::max(1.0, a.f_statistic));
  EXPECT_EQ(a.significant, b.significant);
}
