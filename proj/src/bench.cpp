#include "vlgc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vlgc/parallel.hpp"
#include "vlgc/random.hpp"

namespace vlgc {

namespace {

Estimate estimate(const std::vector<double>& values) {
  Estimate e;
  if (values.empty()) return e;
  const double n = static_cast<double>(values.size());
  e.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.half_width = 1.96 * std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

Estimate mean_of(const std::vector<BenchCell>& cells, Estimate BenchCell::*field) {
  Estimate e;
  for (const auto& c : cells) {
    e.mean += (c.*field).mean;
    e.half_width += (c.*field).half_width;
  }
  const double n = static_cast<double>(cells.size());
  e.mean /= n;
  e.half_width /= n;
  return e;
}

struct TrialOutcome {
  double causal = 0.0;
  double nocause = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double top_hit = 0.0;
};

TrialOutcome run_trial(const BenchConfig& cfg, std::size_t max_lag, std::uint64_t seed) {
  const GeneratorSpec spec = with_seed(cfg.generator, seed);
  InferenceConfig inf = cfg.inference;
  inf.max_lag = max_lag;
  inf.threads = 1;
  TrialOutcome out;
  switch (cfg.suite) {
    case BenchSuite::Pairwise: {
      const CausalPair pair = gen_causal_pair(spec);
      inf.seed = derive_seed(seed, {0});
      const bool forward = pairwise_cause(pair.cause, pair.effect, inf).label != CausalLabel::None;
      bool reverse = false;
      if (forward) {
        inf.seed = derive_seed(seed, {1});
        reverse = pairwise_cause(pair.effect, pair.cause, inf).label != CausalLabel::None;
      }
      out.causal = forward && !reverse ? 1.0 : 0.0;
      const auto [x, y] = gen_independent_pair(spec);
      inf.seed = derive_seed(seed, {2});
      out.nocause = pairwise_cause(x, y, inf).label == CausalLabel::None ? 1.0 : 0.0;
      break;
    }
    case BenchSuite::Group: {
      const GroupInstance group = gen_group(spec);
      inf.seed = derive_seed(seed, {3});
      const EdgeMetrics m = eval_edges(infer_graph(group.set, inf), group.truth);
      out.precision = m.precision;
      out.recall = m.recall;
      out.f1 = m.f1;
      break;
    }
    case BenchSuite::Initiator: {
      const PlantedGroup planted = gen_planted_initiator(spec, cfg.group_members);
      inf.seed = derive_seed(seed, {4});
      const auto scores = initiator_scores(planted.set, inf);
      const double top = scores[planted.initiator].score;
      bool strict = top > 0.0;
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (i != planted.initiator && scores[i].score >= top) strict = false;
      }
      out.top_hit = strict ? 1.0 : 0.0;
      break;
    }
  }
  return out;
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master, std::size_t trial) noexcept { return derive_seed(master, {trial}); }

std::size_t lag_from_fraction(double fraction, std::size_t length) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw InvalidInput("lag fraction must lie in (0, 1)");
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(fraction * static_cast<double>(length))));
}

BenchResult run_bench(const BenchConfig& cfg) {
  if (cfg.trials < 1) throw InvalidInput("bench needs at least one trial");
  if (cfg.lag_fractions.empty()) throw InvalidInput("bench needs at least one lag fraction");
  validate(cfg.generator);

  const std::size_t cells = cfg.lag_fractions.size();
  std::vector<std::size_t> lags(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    lags[c] = lag_from_fraction(cfg.lag_fractions[c], cfg.generator.length);
    InferenceConfig check = cfg.inference;
    check.max_lag = lags[c];
    validate(check, cfg.generator.length);
  }

  std::vector<TrialOutcome> outcomes(cells * cfg.trials);
  parallel_for(
      outcomes.size(),
      [&](std::size_t k) {
        const std::size_t c = k / cfg.trials;
        outcomes[k] = run_trial(cfg, lags[c], trial_seed(cfg.seed, k % cfg.trials));
      },
      cfg.inference.threads);

  BenchResult result;
  for (std::size_t c = 0; c < cells; ++c) {
    std::vector<double> causal, nocause, precision, recall, f1, top;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const TrialOutcome& o = outcomes[c * cfg.trials + t];
      causal.push_back(o.causal);
      nocause.push_back(o.nocause);
      precision.push_back(o.precision);
      recall.push_back(o.recall);
      f1.push_back(o.f1);
      top.push_back(o.top_hit);
    }
    BenchCell cell;
    cell.lag_fraction = cfg.lag_fractions[c];
    cell.max_lag = lags[c];
    cell.trials = cfg.trials;
    cell.causal_accuracy = estimate(causal);
    cell.nocause_accuracy = estimate(nocause);
    cell.precision = estimate(precision);
    cell.recall = estimate(recall);
    cell.f1 = estimate(f1);
    cell.top_hit = estimate(top);
    result.cells.push_back(cell);
  }

  BenchCell& avg = result.average;
  avg.trials = cfg.trials;
  avg.causal_accuracy = mean_of(result.cells, &BenchCell::causal_accuracy);
  avg.nocause_accuracy = mean_of(result.cells, &BenchCell::nocause_accuracy);
  avg.precision = mean_of(result.cells, &BenchCell::precision);
  avg.recall = mean_of(result.cells, &BenchCell::recall);
  avg.f1 = mean_of(result.cells, &BenchCell::f1);
  avg.top_hit = mean_of(result.cells, &BenchCell::top_hit);
  return result;
}

}  // namespace vlgc
