#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vlgc/core.hpp"

namespace vlgc {

enum class PointCost { Absolute, Squared };

struct WarpConfig {
  std::size_t window = 0;  ///< Sakoe-Chiba band radius: |cause - effect| <= window.
  PointCost point_cost = PointCost::Absolute;
};

/// One aligned index pair: cause sample `cause` is matched to effect sample `effect` (0-based).
struct WarpStep {
  std::size_t cause;
  std::size_t effect;
  friend bool operator==(const WarpStep&, const WarpStep&) = default;
};

using WarpPath = std::vector<WarpStep>;

/// Per-effect-index delays: cause sample t - delays[t] is aligned to effect sample t.
using DelaySequence = std::vector<std::ptrdiff_t>;

struct Alignment {
  double distance = 0.0;
  WarpPath path;
};

[[nodiscard]] double point_cost(double a, double b, PointCost kind) noexcept;

/**
 * Checks the warp-path invariants against series lengths: boundary pairs and
 * unit steps from {(0,1),(1,0),(1,1)}. Throws InvalidInput describing the
 * first violation.
 */
void validate_warp_path(const WarpPath& path, std::size_t cause_length, std::size_t effect_length);

/**
 * @brief Banded dynamic time warping between a candidate cause and an effect.
 *
 * Fills only cells with |i - j| <= window, so the cost is O(T * window).
 * Among equal-cost predecessors the backtrack prefers the diagonal step, then
 * the step that advances the cause index, which biases ties toward zero delay.
 *
 * @throws InvalidInput if either series is empty or the band cannot connect
 *         the two corners (window < |Tx - Ty|).
 */
[[nodiscard]] Alignment dtw_align(std::span<const double> cause, std::span<const double> effect,
                                  const WarpConfig& cfg);

/**
 * Converts a warp path to one delay per effect index using the "most recent
 * cause sample" rule: when several pairs share an effect index, the largest
 * cause index wins.
 */
[[nodiscard]] DelaySequence path_to_delays(const WarpPath& path, std::size_t effect_length);

/**
 * Converts a warp path to delays choosing, per effect index, the aligned cause
 * sample with the smallest point cost (the one the effect is most similar to).
 * Equal costs fall back to the most recent cause sample.
 */
[[nodiscard]] DelaySequence path_to_delays(const WarpPath& path, std::span<const double> cause,
                                           std::span<const double> effect, PointCost kind);

/// out[t] = cause[t - delays[t]]; throws InvalidInput if an index leaves the cause series.
[[nodiscard]] std::vector<double> reconstruct(std::span<const double> cause, const DelaySequence& delays);

/// Average sign of the delays, in [-1, 1]. Positive means the effect trails the cause.
[[nodiscard]] double sign_similarity(const DelaySequence& delays);

struct Reconstruction {
  std::vector<double> series;  ///< cause re-indexed through the alignment
  double sim_value = 0.0;
  DelaySequence delays;
  Alignment alignment;
};

/// dtw_align, then per-effect delay selection, reconstruction and sign similarity.
[[nodiscard]] Reconstruction dtw_reconstruction(std::span<const double> cause, std::span<const double> effect,
                                                const WarpConfig& cfg);

}  // namespace vlgc
