#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "vlgc/inference.hpp"
#include "vlgc/synth.hpp"

namespace vlgc {

enum class BenchSuite { Pairwise, Group, Initiator };

struct BenchConfig {
  BenchSuite suite = BenchSuite::Pairwise;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::vector<double> lag_fractions{0.1, 0.2, 0.3, 0.4};  ///< max_lag as fractions of the series length
  std::size_t group_members = 8;                          ///< initiator suite only
  GeneratorSpec generator;                                ///< seed is replaced per trial
  InferenceConfig inference;                              ///< max_lag and seed are replaced per cell and trial
};

/// Mean of a per-trial quantity with a normal-approximation 95% half-width.
struct Estimate {
  double mean = 0.0;
  double half_width = 0.0;
};

struct BenchCell {
  double lag_fraction = 0.0;
  std::size_t max_lag = 0;
  std::size_t trials = 0;
  Estimate causal_accuracy;   ///< pairwise: x -> y detected and y -> x not
  Estimate nocause_accuracy;  ///< pairwise: independent pair reported as NONE
  Estimate precision;         ///< group
  Estimate recall;            ///< group
  Estimate f1;                ///< group
  Estimate top_hit;           ///< initiator: planted source strictly ranked first
};

struct BenchResult {
  std::vector<BenchCell> cells;
  BenchCell average;  ///< cell-wise means over the lag grid
};

[[nodiscard]] std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) noexcept;

/// max_lag for a fraction of the length, at least 1.
[[nodiscard]] std::size_t lag_from_fraction(double fraction, std::size_t length);

/// Trials share data across grid cells; each trial draws from trial_seed(seed, index).
[[nodiscard]] BenchResult run_bench(const BenchConfig& cfg);

}  // namespace vlgc
