#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "vlgc/core.hpp"
#include "vlgc/inference.hpp"
#include "vlgc/synth.hpp"

using vlgc::CausalLabel;
using vlgc::CausalVerdict;
using vlgc::GeneratorSpec;
using vlgc::InferenceConfig;
using vlgc::InvalidInput;
using vlgc::TimeSeries;
using vlgc::TimeSeriesSet;

namespace {

TimeSeries noise(const std::string& name, std::size_t n, std::mt19937_64& engine) {
  std::normal_distribution<double> draw;
  std::vector<double> v(n);
  for (double& a : v) a = draw(engine);
  return TimeSeries(name, std::move(v));
}

TimeSeries shifted(const TimeSeries& x, std::size_t lag, const std::string& name) {
  std::vector<double> v(x.size());
  for (std::size_t t = 0; t < v.size(); ++t) v[t] = x[t >= lag ? t - lag : 0];
  return TimeSeries(name, std::move(v));
}

InferenceConfig config(std::size_t max_lag, std::uint64_t seed = 0) {
  InferenceConfig cfg;
  cfg.max_lag = max_lag;
  cfg.n_boot = 200;
  cfg.seed = seed;
  cfg.threads = 1;
  return cfg;
}

GeneratorSpec generator(std::uint64_t seed) {
  GeneratorSpec spec;
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST(InferenceConfig, Validation) {
  InferenceConfig cfg = config(10);
  EXPECT_NO_THROW(vlgc::validate(cfg, 200));
  EXPECT_THROW(vlgc::validate(cfg, 20), InvalidInput);
  cfg.max_lag = 0;
  EXPECT_THROW(vlgc::validate(cfg, 200), InvalidInput);
  cfg = config(10);
  cfg.sigma = 0.0;
  EXPECT_THROW(vlgc::validate(cfg, 200), InvalidInput);
  cfg.sigma = 1.0;
  EXPECT_NO_THROW(vlgc::validate(cfg, 200));
  cfg.alpha = 1.0;
  EXPECT_THROW(vlgc::validate(cfg, 200), InvalidInput);
  cfg = config(10);
  cfg.regression_lag = 100;
  EXPECT_THROW(vlgc::validate(cfg, 200), InvalidInput);
}

TEST(InferenceConfig, RegressionLagDefaultsToAFifthOfTheLength) {
  InferenceConfig cfg = config(80);
  EXPECT_EQ(vlgc::regression_lag_for(cfg, 200), 40u);
  cfg.max_lag = 10;
  EXPECT_EQ(vlgc::regression_lag_for(cfg, 200), 10u);
  cfg.regression_lag = 3;
  EXPECT_EQ(vlgc::regression_lag_for(cfg, 200), 3u);
}

TEST(VlGrangerFunc, ExactFixedLagFlags) {
  std::mt19937_64 engine(1);
  const TimeSeries x = noise("x", 200, engine);
  const TimeSeries y = shifted(x, 3, "y");
  const auto out = vlgc::vl_granger_func(x, y, config(5), true);
  EXPECT_TRUE(out.granger_flag);
  EXPECT_FALSE(out.sim_value.has_value());
  EXPECT_LT(out.bic_yx, out.bic_y);
}

TEST(VlGrangerFunc, IndependentNoiseRarelyFlags) {
  std::mt19937_64 engine(2);
  int fixed = 0;
  int gated = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const TimeSeries x = noise("x", 200, engine);
    const TimeSeries y = noise("y", 200, engine);
    fixed += vlgc::vl_granger_func(x, y, config(20), true).granger_flag;
    gated += vlgc::pairwise_cause(x, y, config(20, trial)).label != CausalLabel::None;
  }
  EXPECT_LE(fixed, 10);
  EXPECT_LE(gated, 10);
}

TEST(VlGrangerFunc, VariableLagFlagOnNoiseTracksTheSignGate) {
  std::mt19937_64 engine(12);
  for (int trial = 0; trial < 50; ++trial) {
    const TimeSeries x = noise("x", 200, engine);
    const TimeSeries y = noise("y", 200, engine);
    const auto out = vlgc::vl_granger_func(x, y, config(20), false);
    if (out.granger_flag) EXPECT_GE(*out.sim_value, 0.5);
    if (*out.sim_value < 0.5) EXPECT_FALSE(out.granger_flag);
  }
}

TEST(VlGrangerFunc, VariableLagFollowerFlagsWithPositiveSimilarity) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pair = vlgc::gen_causal_pair(generator(seed));
    const auto out = vlgc::vl_granger_func(pair.cause, pair.effect, config(40), false);
    hits += out.granger_flag && *out.sim_value >= 0.5;
  }
  EXPECT_GT(hits, 10);
}

TEST(TimeLagTest, IndependentPairsAreMostlyNone) {
  std::mt19937_64 engine(3);
  int none = 0;
  for (int trial = 0; trial < 30; ++trial) {
    none += vlgc::time_lag_test(noise("x", 200, engine), noise("y", 200, engine), config(20)).label ==
            CausalLabel::None;
  }
  EXPECT_GT(none, 15);
}

TEST(TimeLagTest, ConstantLagIsAlwaysCausal) {
  std::mt19937_64 engine(4);
  for (std::size_t lag : {1, 2, 4, 7}) {
    const TimeSeries x = noise("x", 200, engine);
    std::vector<double> yv(200);
    const TimeSeries base = shifted(x, lag, "y");
    std::normal_distribution<double> jitter(0.0, 0.05);
    for (std::size_t t = 0; t < yv.size(); ++t) yv[t] = base[t] + jitter(engine);
    const CausalVerdict v = vlgc::time_lag_test(x, TimeSeries("y", yv), config(10));
    EXPECT_NE(v.label, CausalLabel::None) << "lag " << lag;
  }
}

TEST(TimeLagTest, FollowerIsMostlyVariable) {
  int variable = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto pair = vlgc::gen_causal_pair(generator(100 + seed));
    variable += vlgc::time_lag_test(pair.cause, pair.effect, config(40)).label == CausalLabel::TrueVariable;
  }
  EXPECT_GT(variable, 10);
}

TEST(TimeLagTest, BothBranchesFiringRecordsTheEncompassingTest) {
  const auto pair = vlgc::gen_causal_pair(generator(7));
  const CausalVerdict v = vlgc::time_lag_test(pair.cause, pair.effect, config(20));
  if (v.fixed.granger_flag && v.variable.granger_flag) EXPECT_TRUE(v.variable_over_fixed.has_value());
  EXPECT_EQ(v.label, v.time_lag_label);
}

TEST(PairwiseCause, FollowerSurvivesTheGates) {
  int kept = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pair = vlgc::gen_causal_pair(generator(200 + seed));
    kept += vlgc::pairwise_cause(pair.cause, pair.effect, config(40, seed)).label != CausalLabel::None;
  }
  EXPECT_GE(kept, 8);
}

TEST(PairwiseCause, GatesNeverUpgrade) {
  std::mt19937_64 engine(5);
  for (int trial = 0; trial < 20; ++trial) {
    const TimeSeries x = noise("x", 150, engine);
    std::vector<double> yv(150);
    const TimeSeries y0 = noise("y", 150, engine);
    for (std::size_t t = 1; t < yv.size(); ++t) yv[t] = y0[t] + 0.3 * (trial % 4) * x[t - 1];
    const TimeSeries y("y", yv);
    InferenceConfig off = config(10, trial);
    off.independence_gate = false;
    off.emulation_gate = false;
    const CausalVerdict raw = vlgc::pairwise_cause(x, y, off);
    const CausalVerdict gated = vlgc::pairwise_cause(x, y, config(10, trial));
    EXPECT_EQ(raw.label, raw.time_lag_label);
    EXPECT_EQ(gated.time_lag_label, raw.time_lag_label);
    if (gated.label != CausalLabel::None) EXPECT_EQ(gated.label, raw.label);
    if (gated.label == CausalLabel::None && raw.label != CausalLabel::None) {
      EXPECT_TRUE(gated.blocked_by_emulation || gated.blocked_by_independence);
    }
  }
}

TEST(PairwiseCause, UnitShiftKeepsItsVerdict) {
  std::mt19937_64 engine(6);
  const TimeSeries x = noise("x", 150, engine);
  const TimeSeries y = shifted(x, 1, "y");
  const CausalVerdict v = vlgc::pairwise_cause(x, y, config(5));
  ASSERT_TRUE(v.independence.has_value());
  EXPECT_TRUE(v.independence->dependent);
  EXPECT_EQ(v.independence->best_shift, 1u);
  EXPECT_EQ(v.label, v.time_lag_label);
  EXPECT_NE(v.label, CausalLabel::None);
}

TEST(PairwiseCause, EmulationGateBlocksTheReverseDirection) {
  int blocked = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pair = vlgc::gen_causal_pair(generator(300 + seed));
    const CausalVerdict reverse = vlgc::pairwise_cause(pair.effect, pair.cause, config(40, seed));
    blocked += reverse.label == CausalLabel::None;
    EXPECT_LE(reverse.sim_value(), 0.0);
  }
  EXPECT_GE(blocked, 9);
}

TEST(InferGraph, IndependentPairHasNoEdges) {
  std::mt19937_64 engine(7);
  int empty = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const TimeSeriesSet set({noise("a", 200, engine), noise("b", 200, engine)});
    empty += vlgc::infer_graph(set, config(20, trial)).edges.empty();
  }
  EXPECT_GE(empty, 8);
}

TEST(InferGraph, FollowerChainGivesOneDirectedEdge) {
  const auto pair = vlgc::gen_causal_pair(generator(11));
  const TimeSeriesSet set({pair.cause, pair.effect});
  const auto graph = vlgc::infer_graph(set, config(40, 3));
  ASSERT_EQ(graph.edges.size(), 1u);
  EXPECT_EQ(graph.edges[0].from, "X");
  EXPECT_EQ(graph.edges[0].to, "Y");
  EXPECT_GT(graph.edges[0].score, 0.0);
  EXPECT_EQ(graph.nodes, (std::vector<std::string>{"X", "Y"}));
}

TEST(InferGraph, ThreadCountDoesNotChangeTheResult) {
  const auto group = vlgc::gen_group(generator(12));
  InferenceConfig one = config(20, 9);
  InferenceConfig many = one;
  many.threads = 4;
  const auto a = vlgc::infer_graph(group.set, one);
  const auto b = vlgc::infer_graph(group.set, many);
  ASSERT_EQ(a.edges.size(), b.edges.size());
  for (std::size_t i = 0; i < a.edges.size(); ++i) {
    EXPECT_EQ(a.edges[i].from, b.edges[i].from);
    EXPECT_EQ(a.edges[i].to, b.edges[i].to);
    EXPECT_EQ(a.edges[i].score, b.edges[i].score);
  }
}

TEST(InferGraph, NeedsTwoSeries) {
  std::mt19937_64 engine(8);
  EXPECT_THROW((void)vlgc::infer_graph(TimeSeriesSet({noise("a", 50, engine)}), config(5)), InvalidInput);
}

TEST(InitiatorScores, PlantedInitiatorRanksFirst) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto planted = vlgc::gen_planted_initiator(generator(400 + seed), 5);
    const auto scores = vlgc::initiator_scores(planted.set, config(20, seed));
    ASSERT_EQ(scores.size(), 5u);
    const double top = scores[planted.initiator].score;
    bool strict = top > 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (i != planted.initiator) strict = strict && scores[i].score < top;
      EXPECT_GE(scores[i].score, 0.0);
      EXPECT_LE(scores[i].score, 1.0);
    }
    hits += strict;
  }
  EXPECT_GE(hits, 4);
}

TEST(InitiatorScores, IndependentMembersScoreZero) {
  std::mt19937_64 engine(9);
  int all_zero = 0;
  for (int trial = 0; trial < 6; ++trial) {
    const TimeSeriesSet set({noise("a", 200, engine), noise("b", 200, engine), noise("c", 200, engine),
                             noise("d", 200, engine)});
    bool zero = true;
    for (const auto& s : vlgc::initiator_scores(set, config(20, trial))) zero = zero && s.score == 0.0;
    all_zero += zero;
  }
  EXPECT_GE(all_zero, 4);
}

TEST(InitiatorScores, IdenticalCopiesTie) {
  const auto planted = vlgc::gen_planted_initiator(generator(13), 4);
  std::vector<TimeSeries> members(planted.set.members());
  members.push_back(planted.set[planted.initiator].renamed("copy"));
  const auto scores = vlgc::initiator_scores(TimeSeriesSet(members), config(20, 1));
  const std::size_t copy = members.size() - 1;
  EXPECT_NEAR(scores[planted.initiator].raw, scores[copy].raw, 1e-9);
}

TEST(InitiatorScores, NeedsThreeMembers) {
  std::mt19937_64 engine(10);
  EXPECT_THROW(
      (void)vlgc::initiator_scores(TimeSeriesSet({noise("a", 50, engine), noise("b", 50, engine)}), config(5)),
      InvalidInput);
}
