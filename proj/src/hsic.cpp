#include "vlgc/hsic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "vlgc/core.hpp"
#include "vlgc/random.hpp"

namespace vlgc {

namespace {

constexpr std::size_t kMinSamples = 4;

template <typename T>
using ConstVecMap = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

/**
 * Row-major dense square matrix; rows are contiguous so sub-blocks can be
 * walked row by row. The scan stores single-precision Grams to stay in cache.
 */
template <typename T>
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<T> data;
  [[nodiscard]] const T* row(std::size_t i) const { return data.data() + i * n; }
};

template <typename T = double>
SquareMatrix<T> gram_rows(std::span<const double> s, double bandwidth) {
  SquareMatrix<T> g{s.size(), std::vector<T>(s.size() * s.size())};
  const double scale = -1.0 / (2.0 * bandwidth * bandwidth);
  for (std::size_t i = 0; i < s.size(); ++i) {
    g.data[i * g.n + i] = T(1);
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      const double d = s[i] - s[j];
      const auto v = static_cast<T>(std::exp(scale * d * d));
      g.data[i * g.n + j] = v;
      g.data[j * g.n + i] = v;
    }
  }
  return g;
}

/// Row sums of the leading m x m block and their total.
struct BlockSums {
  std::vector<double> rows;
  double total = 0.0;
};

template <typename T>
double row_sum(const T* row, std::size_t m) {
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += row[j];
  return acc;
}

template <typename T>
BlockSums leading_block_sums(const SquareMatrix<T>& g, std::size_t m) {
  BlockSums out{std::vector<double>(m), 0.0};
  for (std::size_t i = 0; i < m; ++i) {
    out.rows[i] = row_sum(g.row(i), m);
    out.total += out.rows[i];
  }
  return out;
}

/// Strictly-upper part of row i of a width-m block: sum over j in (i, m) of a[j] * b[j].
template <typename T>
double upper_dot(const T* a, const T* b, std::size_t i, std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m - i - 1);
  return n > 0 ? static_cast<double>(ConstVecMap<T>(a + i + 1, n).dot(ConstVecMap<T>(b + i + 1, n))) : 0.0;
}

/**
 * HSIC between the leading m x m block of K and the m x m block of M starting
 * at (offset, offset), using
 *   sum(HKH o M) = sum(K o M) - (2/m) sum_i kr_i mr_i + (sum K)(sum M) / m^2
 * for symmetric K and M with unit diagonals, where kr and mr are row sums.
 * The elementwise product is summed over the strict upper triangle and doubled.
 */
double block_hsic(const SquareMatrix<double>& k, const BlockSums& ks, const SquareMatrix<double>& mat,
                  std::size_t offset, std::size_t m) {
  double cross = 0.0;
  double mixed = 0.0;
  double mtotal = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double* mrow = mat.row(offset + i) + offset;
    cross += upper_dot(k.row(i), mrow, i, m);
    const double msum = row_sum(mrow, m);
    mixed += ks.rows[i] * msum;
    mtotal += msum;
  }
  const double md = static_cast<double>(m);
  cross = md + 2.0 * cross;
  const double centered = cross - 2.0 * mixed / md + ks.total * mtotal / (md * md);
  return std::max(centered, 0.0) / (md * md);
}

template <typename T>
void permute_into(const SquareMatrix<T>& src, std::span<const std::size_t> perm, SquareMatrix<T>& dst) {
  const std::size_t n = src.n;
  for (std::size_t a = 0; a < n; ++a) {
    const T* row = src.row(perm[a]);
    T* out = dst.data.data() + a * n;
    for (std::size_t b = 0; b < n; ++b) out[b] = row[perm[b]];
  }
}

void shuffle(std::vector<std::size_t>& perm, Engine& engine) {
  for (std::size_t i = perm.size() - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i);
    std::swap(perm[i], perm[pick(engine)]);
  }
}

/// Largest number of permutation exceedances that still gives p < alpha, or -1 if none does.
long max_exceedances(double alpha, std::size_t n_boot) {
  const double denom = static_cast<double>(n_boot + 1);
  long k = -1;
  while ((2.0 + static_cast<double>(k)) / denom < alpha) ++k;
  return k;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
}

}  // namespace

double kernel_bandwidth(std::span<const double> sample, const KernelConfig& cfg) {
  if (cfg.bandwidth) {
    if (!(*cfg.bandwidth > 0.0)) throw InvalidInput("kernel bandwidth must be positive");
    return *cfg.bandwidth;
  }
  std::vector<double> dists;
  dists.reserve(sample.size() * (sample.size() - 1) / 2);
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (std::size_t j = i + 1; j < sample.size(); ++j) dists.push_back(std::abs(sample[i] - sample[j]));
  }
  if (dists.empty()) return 1.0;
  const auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
  std::nth_element(dists.begin(), mid, dists.end());
  double median = *mid;
  if (dists.size() % 2 == 0) median = 0.5 * (median + *std::max_element(dists.begin(), mid));
  return median > 0.0 ? median : 1.0;
}

Eigen::MatrixXd gram_matrix(std::span<const double> sample, double bandwidth) {
  const SquareMatrix<double> g = gram_rows(sample, bandwidth);
  const auto n = static_cast<Eigen::Index>(g.n);
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(g.data.data(), n, n);
}

double hsic_statistic(std::span<const double> a, std::span<const double> b, const KernelConfig& cfg) {
  if (a.size() != b.size()) throw InvalidInput("HSIC needs paired samples of equal size");
  if (a.size() < kMinSamples) throw InvalidInput("HSIC needs at least 4 samples");
  const SquareMatrix<double> k = gram_rows(a, kernel_bandwidth(a, cfg));
  const SquareMatrix<double> l = gram_rows(b, kernel_bandwidth(b, cfg));
  return block_hsic(k, leading_block_sums(k, k.n), l, 0, k.n);
}

HsicResult hsic_test(std::span<const double> a, std::span<const double> b, double alpha, std::size_t n_boot,
                     const KernelConfig& cfg, std::uint64_t seed) {
  check_alpha(alpha);
  if (n_boot < 100) throw InvalidInput("hsic_test needs at least 100 permutations");
  if (a.size() != b.size()) throw InvalidInput("HSIC needs paired samples of equal size");
  if (a.size() < kMinSamples) throw InvalidInput("HSIC needs at least 4 samples");

  const std::size_t m = a.size();
  const SquareMatrix<double> k = gram_rows(a, kernel_bandwidth(a, cfg));
  const SquareMatrix<double> l = gram_rows(b, kernel_bandwidth(b, cfg));
  const BlockSums ks = leading_block_sums(k, m);

  HsicResult out;
  out.statistic = block_hsic(k, ks, l, 0, m);

  Engine engine(seed);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  SquareMatrix<double> permuted{m, std::vector<double>(m * m)};
  std::vector<double> null(n_boot);
  std::size_t exceed = 0;
  for (std::size_t r = 0; r < n_boot; ++r) {
    shuffle(perm, engine);
    permute_into(l, perm, permuted);
    null[r] = block_hsic(k, ks, permuted, 0, m);
    if (null[r] >= out.statistic) ++exceed;
  }
  out.p_value = static_cast<double>(exceed + 1) / static_cast<double>(n_boot + 1);
  out.dependent = out.p_value < alpha;

  std::sort(null.begin(), null.end());
  const long kmax = max_exceedances(alpha, n_boot);
  out.threshold = kmax < 0 ? std::numeric_limits<double>::infinity()
                           : null[n_boot - static_cast<std::size_t>(kmax) - 1];
  return out;
}

ScanResult dependency_scan(std::span<const double> x, std::span<const double> xdtw, std::span<const double> y,
                           const ScanConfig& cfg) {
  check_alpha(cfg.alpha);
  if (cfg.max_lag < 1) throw InvalidInput("dependency scan needs max_lag >= 1");
  if (cfg.n_boot < 1) throw InvalidInput("dependency scan needs at least one permutation");
  const std::size_t len = y.size();
  if (x.size() != len || xdtw.size() != len) throw InvalidInput("dependency scan needs equal-length series");

  using Gram = SquareMatrix<float>;
  std::vector<Gram> causes;
  causes.push_back(gram_rows<float>(x, kernel_bandwidth(x, cfg.kernel)));
  if (cfg.include_reconstruction) causes.push_back(gram_rows<float>(xdtw, kernel_bandwidth(xdtw, cfg.kernel)));
  const std::size_t families = causes.size();
  const Gram gy = gram_rows<float>(y, kernel_bandwidth(y, cfg.kernel));

  struct Shift {
    std::size_t shift;
    std::vector<BlockSums> sums;  // one per cause family
  };
  std::vector<Shift> shifts;
  for (std::size_t s = 1; s <= cfg.max_lag && s < len; ++s) {
    if (len - s < kMinSamples) continue;
    shifts.push_back({s, std::vector<BlockSums>(families)});
  }
  if (shifts.empty()) throw InvalidInput("every scanned shift leaves fewer than 4 overlapping samples");
  const std::size_t widest = shifts.back().shift;

  // Leading-block row sums for every shift, peeled off the widest block one column at a time.
  auto fill_block_sums = [&](std::size_t f) {
    const Gram& g = causes[f];
    std::vector<double> rows(len, 0.0);
    std::size_t m = len - shifts.front().shift;
    for (std::size_t i = 0; i < m; ++i) rows[i] = row_sum(g.row(i), m);
    for (auto& sh : shifts) {
      const std::size_t target = len - sh.shift;
      while (m > target) {
        --m;
        for (std::size_t i = 0; i < m; ++i) rows[i] -= g.row(i)[m];
      }
      BlockSums& b = sh.sums[f];
      b.rows.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(m));
      b.total = std::accumulate(b.rows.begin(), b.rows.end(), 0.0);
    }
  };
  for (std::size_t f = 0; f < families; ++f) fill_block_sums(f);

  // Row suffix sums of the effect Gram from each scanned start column.
  std::vector<double> suffix(len * (widest + 1));
  auto fill_suffix = [&](const Gram& eff) {
    for (std::size_t r = 0; r < len; ++r) {
      const float* row = eff.row(r);
      double acc = 0.0;
      for (std::size_t c = len; c-- > widest + 1;) acc += row[c];
      for (std::size_t c = widest + 1; c-- > 0;) {
        acc += row[c];
        suffix[r * (widest + 1) + c] = acc;
      }
    }
  };

  // Cause windows are leading blocks of the cause Grams; effect windows start at the shift.
  // Fills one HSIC value per (shift, family), shift-major.
  std::vector<double> cross(families), mixed(families);
  auto scan_values = [&](const Gram& eff, double* out) {
    fill_suffix(eff);
    for (std::size_t k = 0; k < shifts.size(); ++k) {
      const Shift& sh = shifts[k];
      const std::size_t s = sh.shift;
      const std::size_t m = len - s;
      std::fill(cross.begin(), cross.end(), 0.0);
      std::fill(mixed.begin(), mixed.end(), 0.0);
      double mtotal = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const float* mrow = eff.row(s + i) + s;
        const double msum = suffix[(s + i) * (widest + 1) + s];
        mtotal += msum;
        for (std::size_t f = 0; f < families; ++f) {
          cross[f] += upper_dot(causes[f].row(i), mrow, i, m);
          mixed[f] += sh.sums[f].rows[i] * msum;
        }
      }
      const double md = static_cast<double>(m);
      for (std::size_t f = 0; f < families; ++f) {
        const double centered = md + 2.0 * cross[f] - 2.0 * mixed[f] / md + sh.sums[f].total * mtotal / (md * md);
        out[k * families + f] = std::max(centered, 0.0) / (md * md);
      }
    }
  };

  ScanResult out;
  const std::size_t width = shifts.size() * families;
  out.tests = width;

  // Row 0 holds the observed values, rows 1..n_boot the permutations.
  const std::size_t rows = cfg.n_boot + 1;
  std::vector<double> values(rows * width);
  scan_values(gy, values.data());
  Engine engine(cfg.seed);
  std::vector<std::size_t> perm(len);
  std::iota(perm.begin(), perm.end(), 0);
  Gram permuted{len, std::vector<float>(len * len)};
  for (std::size_t r = 1; r < rows; ++r) {
    shuffle(perm, engine);
    permute_into(gy, perm, permuted);
    scan_values(permuted, values.data() + r * width);
  }
  out.permutations = cfg.n_boot;

  // Studentize every test by its null moments over all rows, which keeps the rows exchangeable.
  std::vector<double> mean(width, 0.0), scale(width, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < width; ++k) mean[k] += values[r * width + k];
  }
  for (double& v : mean) v /= static_cast<double>(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t k = 0; k < width; ++k) {
      const double d = values[r * width + k] - mean[k];
      scale[k] += d * d;
    }
  }
  for (double& v : scale) v = std::sqrt(v / static_cast<double>(rows));
  auto row_max = [&](std::size_t r, std::size_t* arg) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < width; ++k) {
      const double z = scale[k] > 0.0 ? (values[r * width + k] - mean[k]) / scale[k] : 0.0;
      if (z > best) {
        best = z;
        if (arg) *arg = k;
      }
    }
    return best;
  };

  std::size_t arg = 0;
  const double observed = row_max(0, &arg);
  out.statistic = values[arg];
  out.best_shift = shifts[arg / families].shift;
  out.best_on_reconstruction = arg % families == 1;
  std::size_t exceed = 0;
  for (std::size_t r = 1; r < rows; ++r) exceed += row_max(r, nullptr) >= observed;
  out.p_value = static_cast<double>(exceed + 1) / static_cast<double>(rows);
  out.dependent = out.p_value < cfg.alpha;
  return out;
}

}  // namespace vlgc
