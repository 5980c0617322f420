#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace vlgc {

/// Gaussian RBF kernel. An empty bandwidth selects the median pairwise distance.
struct KernelConfig {
  std::optional<double> bandwidth;
};

struct HsicResult {
  double statistic = 0.0;
  double threshold = 0.0;
  double p_value = 1.0;
  bool dependent = false;
};

/// Bandwidth actually used for a sample: explicit value, else median |a_i - a_j|, else 1.
[[nodiscard]] double kernel_bandwidth(std::span<const double> sample, const KernelConfig& cfg);

[[nodiscard]] Eigen::MatrixXd gram_matrix(std::span<const double> sample, double bandwidth);

/// Biased HSIC estimate (1/m^2) trace(K H L H). Requires m >= 4 paired samples.
[[nodiscard]] double hsic_statistic(std::span<const double> a, std::span<const double> b, const KernelConfig& cfg);

/**
 * Permutation test of independence. `b` is permuted `n_boot` times with an
 * engine seeded from `seed`; p = (1 + #{perm >= observed}) / (n_boot + 1).
 * The reported threshold is the permutation-order statistic that makes
 * statistic > threshold, p < alpha and `dependent` agree exactly.
 */
[[nodiscard]] HsicResult hsic_test(std::span<const double> a, std::span<const double> b, double alpha,
                                   std::size_t n_boot, const KernelConfig& cfg, std::uint64_t seed);

struct ScanResult {
  bool dependent = false;
  double p_value = 1.0;          ///< family-wise p-value over all scanned shifts
  double statistic = 0.0;        ///< observed HSIC at the most significant shift
  std::size_t best_shift = 0;    ///< shift with the largest standardised HSIC
  bool best_on_reconstruction = false;
  std::size_t tests = 0;         ///< number of shift tests that entered the scan
  std::size_t permutations = 0;  ///< permutations evaluated
};

struct ScanConfig {
  std::size_t max_lag = 1;
  double alpha = 0.01;
  std::size_t n_boot = 500;
  KernelConfig kernel;
  std::uint64_t seed = 0;
  bool include_reconstruction = true;  ///< also scan shifts of xdtw
};

/**
 * Tests y(t) against x(t - s) and xdtw(t - s) for s = 1..max_lag, each on
 * its overlapping rows. Shifts with fewer than 4 overlapping samples are
 * skipped. The family is controlled with a single-step max-statistic
 * permutation test: y is permuted jointly for every shift, each shift's HSIC
 * is standardised by its mean and spread over the observed and permuted
 * samples, and the observed maximum is ranked against the permuted maxima.
 */
[[nodiscard]] ScanResult dependency_scan(std::span<const double> x, std::span<const double> xdtw,
                                         std::span<const double> y, const ScanConfig& cfg);

}  // namespace vlgc
