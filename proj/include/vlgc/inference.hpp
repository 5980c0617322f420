#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vlgc/core.hpp"
#include "vlgc/dtw.hpp"
#include "vlgc/hsic.hpp"
#include "vlgc/regression.hpp"

namespace vlgc {

/// VG (All) gates every regression comparison with an F-test; VG (No F-test) uses BIC alone.
enum class Variant { All, NoFTest };

enum class CausalLabel { None, TrueFixed, TrueVariable };

[[nodiscard]] std::string_view to_string(CausalLabel label) noexcept;
[[nodiscard]] std::string_view to_string(Variant variant) noexcept;

struct InferenceConfig {
  std::size_t max_lag = 1;                    ///< largest admissible delay: warp band and scanned shifts
  std::optional<std::size_t> regression_lag;  ///< regression lag order; see regression_lag_for()
  double sigma = 0.5;                         ///< emulation threshold on the sign similarity
  double alpha = 0.01;                        ///< level of the F-tests and of the independence scan
  Variant variant = Variant::All;
  KernelConfig kernel;
  std::size_t n_boot = 500;
  std::uint64_t seed = 0;
  PointCost point_cost = PointCost::Absolute;
  bool independence_gate = true;  ///< downgrade to NONE when the scan finds no dependence
  bool emulation_gate = true;     ///< require sim_value >= sigma for any causal label
  bool scan_reconstruction = true;   ///< independence scan also covers shifts of the reconstruction
  std::size_t threads = 0;        ///< workers for the graph and initiator drivers; 0 = all cores
};

/// Throws InvalidInput if the configuration cannot be used on series of this length.
void validate(const InferenceConfig& cfg, std::size_t length);

/**
 * Lag order of the regressions. Defaults to min(max_lag, length / 5): the
 * encompassing model with own, cause and reconstructed lags has 3p + 1
 * columns on length - p rows, and this cap keeps it identifiable with at
 * least p - 1 residual degrees of freedom. An explicit regression_lag wins.
 */
[[nodiscard]] std::size_t regression_lag_for(const InferenceConfig& cfg, std::size_t length);

struct VLGrangerOutcome {
  bool granger_flag = false;
  RegressionFit r_y;
  RegressionFit r_yx;  ///< fixed-lag fit, or the reconstructed-cause fit for the variable-lag call
  ModelComparison comparison;
  double bic_y = 0.0;
  double bic_yx = 0.0;
  std::optional<double> sim_value;               ///< variable-lag call only
  std::optional<Reconstruction> reconstruction;  ///< variable-lag call only
};

/// One pass of the lagged-regression test, either fixed-lag or through the DTW reconstruction.
[[nodiscard]] VLGrangerOutcome vl_granger_func(const TimeSeries& x, const TimeSeries& y, const InferenceConfig& cfg,
                                               bool fix_lag);

struct CausalVerdict {
  CausalLabel label = CausalLabel::None;
  CausalLabel time_lag_label = CausalLabel::None;  ///< label before any gate
  VLGrangerOutcome fixed;
  VLGrangerOutcome variable;
  /// Encompassing-model test used when both branches fire.
  std::optional<ModelComparison> variable_over_fixed;
  std::optional<ScanResult> independence;
  bool blocked_by_emulation = false;
  bool blocked_by_independence = false;

  [[nodiscard]] double sim_value() const { return variable.sim_value.value_or(0.0); }
  /// BIC(r_Y) minus the better of the fixed-lag and variable-lag BICs.
  [[nodiscard]] double bic_improvement() const;
};

/**
 * Runs the fixed-lag and variable-lag passes and resolves the four cases:
 * both fire -> TRUE_VARIABLE iff the variable-lag BIC is significantly below
 * both alternatives, else TRUE_FIXED; only fixed -> TRUE_FIXED; only
 * variable -> TRUE_VARIABLE; neither -> NONE.
 */
[[nodiscard]] CausalVerdict time_lag_test(const TimeSeries& x, const TimeSeries& y, const InferenceConfig& cfg);

/// time_lag_test followed by the emulation and independence gates. Never upgrades NONE.
[[nodiscard]] CausalVerdict pairwise_cause(const TimeSeries& x, const TimeSeries& y, const InferenceConfig& cfg);

struct CausalEdge {
  std::string from;
  std::string to;
  CausalLabel label = CausalLabel::None;
  double score = 0.0;  ///< BIC improvement over the own-past model
  double sim_value = 0.0;
};

struct CausalGraph {
  std::vector<std::string> nodes;
  std::vector<CausalEdge> edges;
};

/// Seed of the ordered pair (cause, effect) under the master seed.
[[nodiscard]] std::uint64_t pair_seed(std::uint64_t master, std::size_t cause, std::size_t effect) noexcept;

/// Pairwise inference over every ordered pair; edges keep the set's member order.
[[nodiscard]] CausalGraph infer_graph(const TimeSeriesSet& set, const InferenceConfig& cfg);

struct InitiatorScore {
  std::string name;
  double score = 0.0;  ///< in [0, 1] after max-normalisation
  double raw = 0.0;
  CausalLabel label = CausalLabel::None;
  double sim_value = 0.0;
};

/**
 * Tests every member against the aggregate of the remaining members. A
 * member's raw score is zero for a NONE verdict, otherwise the per-observation
 * BIC improvement times max(sim_value, 0); scores are divided by the largest
 * raw score. Results keep the set's member order.
 */
[[nodiscard]] std::vector<InitiatorScore> initiator_scores(const TimeSeriesSet& set, const InferenceConfig& cfg);

}  // namespace vlgc
