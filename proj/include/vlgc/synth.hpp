#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vlgc/core.hpp"
#include "vlgc/dtw.hpp"
#include "vlgc/inference.hpp"

namespace vlgc {

enum class BaseModel { Normal, Arma };

struct GeneratorSpec {
  BaseModel model = BaseModel::Normal;
  std::size_t length = 200;
  std::size_t min_lag = 1;  ///< smallest follower delay
  std::size_t max_lag = 20;
  /// Interval on which a follower is frozen; empty disables it.
  std::optional<Interval> constant_segment = Interval{109, 149};
  double noise_scale = 1.0;      ///< standard deviation of the base innovations
  double follower_noise = 0.05;  ///< follower noise as a fraction of the leader's standard deviation
  std::size_t min_change_points = 3;
  std::size_t max_change_points = 5;
  std::uint64_t seed = 0;
};

void validate(const GeneratorSpec& spec);

[[nodiscard]] GeneratorSpec with_seed(GeneratorSpec spec, std::uint64_t seed);

/// x(0) = innovations(0); x(t) = 0.9 innovations(t) + 0.1 x(t-1).
[[nodiscard]] std::vector<double> arma_recursion(std::span<const double> innovations);

/// Gaussian white noise (Normal) or the AR recursion driven by Gaussian innovations (Arma). Named "X".
[[nodiscard]] TimeSeries gen_base(const GeneratorSpec& spec);

struct Follower {
  TimeSeries series;
  DelaySequence delays;  ///< series(t) = leader(t - delays[t]) + noise
};

/**
 * Variable-lag copy of `leader`. Lags are piecewise constant between random
 * change points, drawn from [min_lag, max_lag]; the source index never moves
 * backwards, so the generating alignment is monotone. Inside the constant
 * segment the follower holds the value it had on entering it.
 */
[[nodiscard]] Follower gen_follower(const TimeSeries& leader, const GeneratorSpec& spec);

/// Two independent base series "X" and "Y" drawn under distinct sub-seeds.
[[nodiscard]] std::pair<TimeSeries, TimeSeries> gen_independent_pair(const GeneratorSpec& spec);

struct CausalPair {
  TimeSeries cause;
  TimeSeries effect;
  DelaySequence delays;
};

/// A base series "X" and its variable-lag follower "Y".
[[nodiscard]] CausalPair gen_causal_pair(const GeneratorSpec& spec);

struct TruthEdge {
  std::string from;
  std::string to;
  DelaySequence delays;
};

struct GroundTruth {
  std::vector<TruthEdge> edges;
  [[nodiscard]] bool contains(const std::string& from, const std::string& to) const;
};

struct GroupInstance {
  TimeSeriesSet set;
  GroundTruth truth;
};

/**
 * Three sources X1..X3, variable-lag followers Y1..Y3, and pair mixtures
 * Y12, Y13, Y23, each the mean of two sources shifted by one fixed lag per
 * source plus follower noise. Nine true edges.
 */
[[nodiscard]] GroupInstance gen_group(const GeneratorSpec& spec);

struct PlantedGroup {
  TimeSeriesSet set;
  std::size_t initiator = 0;
};

/**
 * A coordinated group: one source trajectory (the running sum of base draws)
 * and `members - 1` independent variable-lag followers of it, in a
 * seed-dependent order. The source holds its position over the constant
 * segment, so the followers converge on that value after their own delays.
 */
[[nodiscard]] PlantedGroup gen_planted_initiator(const GeneratorSpec& spec, std::size_t members);

struct EdgeMetrics {
  double precision = 0.0;  ///< 0 when nothing is predicted
  double recall = 0.0;     ///< 0 when nothing is true
  double f1 = 0.0;
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
};

[[nodiscard]] EdgeMetrics eval_edges(const CausalGraph& predicted, const GroundTruth& truth);

}  // namespace vlgc
