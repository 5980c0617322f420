#include "vlgc/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace vlgc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pair_text(const WarpStep& s) {
  return "(" + std::to_string(s.cause) + "," + std::to_string(s.effect) + ")";
}

/// Accumulated-cost table restricted to the band |i - j| <= radius.
class BandedTable {
 public:
  BandedTable(std::size_t rows, std::size_t cols, std::size_t radius)
      : rows_(rows), cols_(cols), radius_(radius), width_(2 * radius + 1), cells_(rows * width_, kInf) {}

  [[nodiscard]] bool inside(std::size_t i, std::size_t j) const noexcept {
    if (i >= rows_ || j >= cols_) return false;
    return (i > j ? i - j : j - i) <= radius_;
  }
  [[nodiscard]] double get(std::size_t i, std::size_t j) const noexcept {
    return inside(i, j) ? cells_[slot(i, j)] : kInf;
  }
  void set(std::size_t i, std::size_t j, double v) noexcept { cells_[slot(i, j)] = v; }
  [[nodiscard]] std::size_t lo(std::size_t i) const noexcept { return i > radius_ ? i - radius_ : 0; }
  [[nodiscard]] std::size_t hi(std::size_t i) const noexcept { return std::min(cols_ - 1, i + radius_); }

 private:
  [[nodiscard]] std::size_t slot(std::size_t i, std::size_t j) const noexcept {
    return i * width_ + (j + radius_ - i);
  }

  std::size_t rows_, cols_, radius_, width_;
  std::vector<double> cells_;
};

}  // namespace

double point_cost(double a, double b, PointCost kind) noexcept {
  const double d = a - b;
  return kind == PointCost::Squared ? d * d : std::abs(d);
}

void validate_warp_path(const WarpPath& path, std::size_t cause_length, std::size_t effect_length) {
  if (path.empty()) throw InvalidInput("warp path is empty");
  if (path.front() != WarpStep{0, 0}) throw InvalidInput("warp path must start at (0,0)");
  if (path.back() != WarpStep{cause_length - 1, effect_length - 1}) {
    throw InvalidInput("warp path must end at the last pair of both series, got " + pair_text(path.back()));
  }
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto& a = path[k - 1];
    const auto& b = path[k];
    const bool ok = b.cause >= a.cause && b.effect >= a.effect && b.cause - a.cause <= 1 &&
                    b.effect - a.effect <= 1 && (b.cause != a.cause || b.effect != a.effect);
    if (!ok) throw InvalidInput("illegal warp step " + pair_text(a) + " -> " + pair_text(b));
  }
}

Alignment dtw_align(std::span<const double> cause, std::span<const double> effect, const WarpConfig& cfg) {
  const std::size_t tx = cause.size();
  const std::size_t ty = effect.size();
  if (tx == 0 || ty == 0) throw InvalidInput("dtw_align needs non-empty series");
  const std::size_t gap = tx > ty ? tx - ty : ty - tx;
  if (cfg.window < gap) {
    throw InvalidInput("warp window " + std::to_string(cfg.window) + " is narrower than the length difference " +
                       std::to_string(gap));
  }
  const std::size_t radius = std::min(cfg.window, std::max(tx, ty));

  BandedTable acc(tx, ty, radius);
  for (std::size_t i = 0; i < tx; ++i) {
    for (std::size_t j = acc.lo(i); j <= acc.hi(i); ++j) {
      const double c = point_cost(cause[i], effect[j], cfg.point_cost);
      if (i == 0 && j == 0) {
        acc.set(i, j, c);
        continue;
      }
      double best = kInf;
      if (i > 0 && j > 0) best = acc.get(i - 1, j - 1);
      if (i > 0) best = std::min(best, acc.get(i - 1, j));
      if (j > 0) best = std::min(best, acc.get(i, j - 1));
      acc.set(i, j, c + best);
    }
  }

  Alignment out;
  out.distance = acc.get(tx - 1, ty - 1);
  std::size_t i = tx - 1;
  std::size_t j = ty - 1;
  out.path.push_back({i, j});
  while (i > 0 || j > 0) {
    // Preference on ties: diagonal, then advance of the cause index, then of the effect index.
    const double diag = (i > 0 && j > 0) ? acc.get(i - 1, j - 1) : kInf;
    const double up = i > 0 ? acc.get(i - 1, j) : kInf;
    const double left = j > 0 ? acc.get(i, j - 1) : kInf;
    if (diag <= up && diag <= left) {
      --i;
      --j;
    } else if (up <= left) {
      --i;
    } else {
      --j;
    }
    out.path.push_back({i, j});
  }
  std::reverse(out.path.begin(), out.path.end());
  return out;
}

DelaySequence path_to_delays(const WarpPath& path, std::size_t effect_length) {
  DelaySequence delays(effect_length, 0);
  std::vector<bool> seen(effect_length, false);
  for (const auto& step : path) {
    if (step.effect >= effect_length) throw InvalidInput("warp path exceeds the effect length");
    const auto d = static_cast<std::ptrdiff_t>(step.effect) - static_cast<std::ptrdiff_t>(step.cause);
    // Later pairs for the same effect index carry larger cause indices, i.e. smaller delays.
    if (!seen[step.effect] || d < delays[step.effect]) delays[step.effect] = d;
    seen[step.effect] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw InvalidInput("warp path does not cover every effect index");
  }
  return delays;
}

DelaySequence path_to_delays(const WarpPath& path, std::span<const double> cause, std::span<const double> effect,
                             PointCost kind) {
  const std::size_t ty = effect.size();
  DelaySequence delays(ty, 0);
  std::vector<double> best(ty, kInf);
  std::vector<bool> seen(ty, false);
  for (const auto& step : path) {
    if (step.effect >= ty || step.cause >= cause.size()) throw InvalidInput("warp path exceeds the series");
    const double c = point_cost(cause[step.cause], effect[step.effect], kind);
    const auto d = static_cast<std::ptrdiff_t>(step.effect) - static_cast<std::ptrdiff_t>(step.cause);
    if (!seen[step.effect] || c < best[step.effect] || (c == best[step.effect] && d < delays[step.effect])) {
      best[step.effect] = c;
      delays[step.effect] = d;
    }
    seen[step.effect] = true;
  }
  if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; })) {
    throw InvalidInput("warp path does not cover every effect index");
  }
  return delays;
}

std::vector<double> reconstruct(std::span<const double> cause, const DelaySequence& delays) {
  std::vector<double> out(delays.size());
  for (std::size_t t = 0; t < delays.size(); ++t) {
    const auto src = static_cast<std::ptrdiff_t>(t) - delays[t];
    if (src < 0 || src >= static_cast<std::ptrdiff_t>(cause.size())) {
      throw InvalidInput("delay " + std::to_string(delays[t]) + " at index " + std::to_string(t) +
                         " points outside the cause series");
    }
    out[t] = cause[static_cast<std::size_t>(src)];
  }
  return out;
}

double sign_similarity(const DelaySequence& delays) {
  if (delays.empty()) throw InvalidInput("sign similarity of an empty delay sequence");
  std::ptrdiff_t sum = 0;
  for (auto d : delays) sum += (d > 0) - (d < 0);
  return static_cast<double>(sum) / static_cast<double>(delays.size());
}

Reconstruction dtw_reconstruction(std::span<const double> cause, std::span<const double> effect,
                                  const WarpConfig& cfg) {
  Reconstruction r;
  r.alignment = dtw_align(cause, effect, cfg);
  r.delays = path_to_delays(r.alignment.path, cause, effect, cfg.point_cost);
  r.series = reconstruct(cause, r.delays);
  r.sim_value = sign_similarity(r.delays);
  return r;
}

}  // namespace vlgc
