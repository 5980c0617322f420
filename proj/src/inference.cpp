#include "vlgc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "vlgc/parallel.hpp"
#include "vlgc/random.hpp"

namespace vlgc {

namespace {

bool use_f_test(const InferenceConfig& cfg) { return cfg.variant == Variant::All; }

double best_bic(const CausalVerdict& v) { return std::min(v.fixed.bic_yx, v.variable.bic_yx); }

}  // namespace

std::string_view to_string(CausalLabel label) noexcept {
  switch (label) {
    case CausalLabel::TrueFixed:
      return "TRUE_FIXED";
    case CausalLabel::TrueVariable:
      return "TRUE_VARIABLE";
    case CausalLabel::None:
      break;
  }
  return "NONE";
}

std::string_view to_string(Variant variant) noexcept { return variant == Variant::All ? "all" : "no-ftest"; }

void validate(const InferenceConfig& cfg, std::size_t length) {
  if (cfg.max_lag < 1) throw InvalidInput("max_lag must be at least 1");
  if (2 * cfg.max_lag >= length) {
    throw InvalidInput("max_lag " + std::to_string(cfg.max_lag) + " must be below half the series length " +
                       std::to_string(length));
  }
  if (!(cfg.sigma > 0.0 && cfg.sigma <= 1.0)) throw InvalidInput("sigma must lie in (0, 1]");
  if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) throw InvalidInput("alpha must lie in (0, 1)");
  if (cfg.n_boot < 1) throw InvalidInput("n_boot must be at least 1");
  if (cfg.regression_lag && (*cfg.regression_lag < 1 || 2 * *cfg.regression_lag >= length)) {
    throw InvalidInput("regression_lag must lie in [1, length / 2)");
  }
}

std::size_t regression_lag_for(const InferenceConfig& cfg, std::size_t length) {
  if (cfg.regression_lag) return *cfg.regression_lag;
  return std::min(cfg.max_lag, std::max<std::size_t>(1, length / 5));
}

VLGrangerOutcome vl_granger_func(const TimeSeries& x, const TimeSeries& y, const InferenceConfig& cfg,
                                 bool fix_lag) {
  if (x.size() != y.size()) throw InvalidInput("cause and effect must have equal lengths");
  validate(cfg, y.size());
  const std::size_t lag = regression_lag_for(cfg, y.size());

  VLGrangerOutcome out;
  out.r_y = fit_ar(y.values(), lag);
  if (fix_lag) {
    out.r_yx = fit_arx(y.values(), x.values(), lag);
  } else {
    Reconstruction rec = dtw_reconstruction(x.values(), y.values(), WarpConfig{cfg.max_lag, cfg.point_cost});
    out.r_yx = fit_vl(y.values(), rec.series, lag);
    out.sim_value = rec.sim_value;
    out.reconstruction = std::move(rec);
  }
  out.comparison = compare_nested(out.r_y, out.r_yx, cfg.alpha, use_f_test(cfg));
  out.bic_y = out.comparison.bic_restricted;
  out.bic_yx = out.comparison.bic_full;
  out.granger_flag = out.comparison.significant && (fix_lag || *out.sim_value >= cfg.sigma);
  return out;
}

double CausalVerdict::bic_improvement() const { return fixed.bic_y - best_bic(*this); }

CausalVerdict time_lag_test(const TimeSeries& x, const TimeSeries& y, const InferenceConfig& cfg) {
  CausalVerdict v;
  v.fixed = vl_granger_func(x, y, cfg, true);
  v.variable = vl_granger_func(x, y, cfg, false);

  const bool fixed_fires = v.fixed.granger_flag;
  const bool variable_fires = v.variable.granger_flag;
  if (fixed_fires && variable_fires) {
    const double bic_vl = v.variable.bic_yx;
    bool variable_wins = bic_vl < std::min(v.fixed.bic_yx, v.fixed.bic_y);
    const std::size_t lag = regression_lag_for(cfg, y.size());
    const RegressionFit& fixed_fit = v.fixed.r_yx;
    if (fixed_fit.n_obs > 3 * lag + 1) {
      const RegressionFit full = fit_vl_full(y.values(), x.values(), v.variable.reconstruction->series, lag);
      v.variable_over_fixed = compare_nested(fixed_fit, full, cfg.alpha, use_f_test(cfg));
      if (use_f_test(cfg)) variable_wins = variable_wins && v.variable_over_fixed->p_value < cfg.alpha;
    }
    v.time_lag_label = variable_wins ? CausalLabel::TrueVariable : CausalLabel::TrueFixed;
  } else if (fixed_fires) {
    v.time_lag_label = CausalLabel::TrueFixed;
  } else if (variable_fires) {
    v.time_lag_label = CausalLabel::TrueVariable;
  }
  v.label = v.time_lag_label;
  return v;
}

CausalVerdict pairwise_cause(const TimeSeries& x, const TimeSeries& y, const InferenceConfig& cfg) {
  CausalVerdict v = time_lag_test(x, y, cfg);
  if (v.label == CausalLabel::None) return v;
  if (cfg.emulation_gate && v.sim_value() < cfg.sigma) {
    v.blocked_by_emulation = true;
    v.label = CausalLabel::None;
    return v;
  }
  if (cfg.independence_gate) {
    const ScanConfig scan{cfg.max_lag, cfg.alpha, cfg.n_boot, cfg.kernel, cfg.seed, cfg.scan_reconstruction};
    v.independence = dependency_scan(x.values(), v.variable.reconstruction->series, y.values(), scan);
    if (!v.independence->dependent) {
      v.blocked_by_independence = true;
      v.label = CausalLabel::None;
    }
  }
  return v;
}

std::uint64_t pair_seed(std::uint64_t master, std::size_t cause, std::size_t effect) noexcept {
  return derive_seed(master, {cause, effect});
}

CausalGraph infer_graph(const TimeSeriesSet& set, const InferenceConfig& cfg) {
  if (set.size() < 2) throw InvalidInput("graph inference needs at least two series");
  validate(cfg, set.length());

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = 0; j < set.size(); ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  std::vector<CausalVerdict> verdicts(pairs.size());
  parallel_for(
      pairs.size(),
      [&](std::size_t k) {
        InferenceConfig sub = cfg;
        sub.seed = pair_seed(cfg.seed, pairs[k].first, pairs[k].second);
        verdicts[k] = pairwise_cause(set[pairs[k].first], set[pairs[k].second], sub);
      },
      cfg.threads);

  CausalGraph graph;
  graph.nodes = set.names();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const CausalVerdict& v = verdicts[k];
    if (v.label == CausalLabel::None) continue;
    graph.edges.push_back({set[pairs[k].first].name(), set[pairs[k].second].name(), v.label, v.bic_improvement(),
                           v.sim_value()});
  }
  return graph;
}

std::vector<InitiatorScore> initiator_scores(const TimeSeriesSet& set, const InferenceConfig& cfg) {
  if (set.size() < 3) throw InvalidInput("initiator scoring needs at least three series");
  validate(cfg, set.length());

  std::vector<InitiatorScore> scores(set.size());
  parallel_for(
      set.size(),
      [&](std::size_t i) {
        InferenceConfig sub = cfg;
        sub.seed = derive_seed(cfg.seed, {i});
        const TimeSeries rest = aggregate(set.without(i));
        const CausalVerdict v = pairwise_cause(set[i], rest, sub);
        InitiatorScore& s = scores[i];
        s.name = set[i].name();
        s.label = v.label;
        s.sim_value = v.sim_value();
        if (v.label != CausalLabel::None) {
          const double per_obs = v.bic_improvement() / static_cast<double>(v.fixed.r_y.n_obs);
          s.raw = std::max(per_obs, 0.0) * std::max(s.sim_value, 0.0);
        }
      },
      cfg.threads);

  double top = 0.0;
  for (const auto& s : scores) top = std::max(top, s.raw);
  if (std::isinf(top)) {
    for (auto& s : scores) s.score = std::isinf(s.raw) ? 1.0 : 0.0;
  } else if (top > 0.0) {
    for (auto& s : scores) s.score = s.raw / top;
  }
  return scores;
}

}  // namespace vlgc
