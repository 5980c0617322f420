#include "vlgc/report.hpp"

#include <cmath>

namespace vlgc {

namespace {

Json fit_json(const RegressionFit& fit) {
  return Json{{"rss", number(fit.rss)},
              {"n_obs", fit.n_obs},
              {"n_params", fit.n_params},
              {"rank_deficient", fit.rank_deficient}};
}

Json comparison_json(const ModelComparison& c) {
  return Json{{"bic_restricted", number(c.bic_restricted)},
              {"bic_full", number(c.bic_full)},
              {"f_statistic", number(c.f_statistic)},
              {"p_value", number(c.p_value)},
              {"significant", c.significant}};
}

Json outcome_json(const VLGrangerOutcome& o) {
  Json j{{"granger_flag", o.granger_flag},
         {"bic_y", number(o.bic_y)},
         {"bic_yx", number(o.bic_yx)},
         {"r_y", fit_json(o.r_y)},
         {"r_yx", fit_json(o.r_yx)},
         {"comparison", comparison_json(o.comparison)}};
  if (o.sim_value) j["sim_value"] = number(*o.sim_value);
  return j;
}

const char* suite_name(BenchSuite s) {
  switch (s) {
    case BenchSuite::Group:
      return "group";
    case BenchSuite::Initiator:
      return "initiator";
    case BenchSuite::Pairwise:
      break;
  }
  return "pairwise";
}

Json estimate_json(const Estimate& e) { return Json{{"mean", number(e.mean)}, {"half_width", number(e.half_width)}}; }

Json cell_json(const BenchCell& c, BenchSuite suite) {
  Json j{{"lag_fraction", number(c.lag_fraction)}, {"max_lag", c.max_lag}, {"trials", c.trials}};
  switch (suite) {
    case BenchSuite::Pairwise:
      j["causal_accuracy"] = estimate_json(c.causal_accuracy);
      j["nocause_accuracy"] = estimate_json(c.nocause_accuracy);
      break;
    case BenchSuite::Group:
      j["precision"] = estimate_json(c.precision);
      j["recall"] = estimate_json(c.recall);
      j["f1"] = estimate_json(c.f1);
      break;
    case BenchSuite::Initiator:
      j["top_hit_rate"] = estimate_json(c.top_hit);
      break;
  }
  return j;
}

}  // namespace

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const InferenceConfig& cfg, std::size_t length) {
  Json j{{"max_lag", cfg.max_lag},
         {"regression_lag", regression_lag_for(cfg, length)},
         {"sigma", number(cfg.sigma)},
         {"alpha", number(cfg.alpha)},
         {"variant", std::string(to_string(cfg.variant))},
         {"n_boot", cfg.n_boot},
         {"seed", cfg.seed},
         {"point_cost", cfg.point_cost == PointCost::Absolute ? "absolute" : "squared"},
         {"independence_gate", cfg.independence_gate},
         {"emulation_gate", cfg.emulation_gate},
         {"scan_reconstruction", cfg.scan_reconstruction}};
  j["kernel_bandwidth"] = cfg.kernel.bandwidth ? number(*cfg.kernel.bandwidth) : Json("median");
  return j;
}

Json to_json(const CausalVerdict& v) {
  Json j{{"label", std::string(to_string(v.label))},
         {"time_lag_label", std::string(to_string(v.time_lag_label))},
         {"sim_value", number(v.sim_value())},
         {"bic_improvement", number(v.bic_improvement())},
         {"blocked_by_emulation", v.blocked_by_emulation},
         {"blocked_by_independence", v.blocked_by_independence},
         {"fixed", outcome_json(v.fixed)},
         {"variable", outcome_json(v.variable)}};
  if (v.variable_over_fixed) j["variable_over_fixed"] = comparison_json(*v.variable_over_fixed);
  if (v.independence) {
    const ScanResult& s = *v.independence;
    j["independence"] = Json{{"dependent", s.dependent},
                             {"p_value", number(s.p_value)},
                             {"statistic", number(s.statistic)},
                             {"best_shift", s.best_shift},
                             {"best_on_reconstruction", s.best_on_reconstruction},
                             {"tests", s.tests},
                             {"permutations", s.permutations}};
  }
  return j;
}

Json to_json(const CausalGraph& graph) {
  Json edges = Json::array();
  for (const auto& e : graph.edges) {
    edges.push_back(Json{{"from", e.from},
                         {"to", e.to},
                         {"label", std::string(to_string(e.label))},
                         {"score", number(e.score)},
                         {"sim_value", number(e.sim_value)}});
  }
  return Json{{"nodes", graph.nodes}, {"edges", std::move(edges)}};
}

Json to_json(const std::vector<InitiatorScore>& scores) {
  Json out = Json::array();
  for (const auto& s : scores) {
    out.push_back(Json{{"name", s.name},
                       {"score", number(s.score)},
                       {"raw", number(s.raw)},
                       {"label", std::string(to_string(s.label))},
                       {"sim_value", number(s.sim_value)}});
  }
  return out;
}

Json to_json(const BenchConfig& cfg) {
  Json j{{"suite", suite_name(cfg.suite)},
         {"model", cfg.generator.model == BaseModel::Normal ? "normal" : "arma"},
         {"trials", cfg.trials},
         {"seed", cfg.seed},
         {"length", cfg.generator.length},
         {"lag_fractions", Json::array()}};
  for (double f : cfg.lag_fractions) j["lag_fractions"].push_back(number(f));
  if (cfg.suite == BenchSuite::Initiator) j["members"] = cfg.group_members;
  j["inference"] = to_json(cfg.inference, cfg.generator.length);
  j["inference"].erase("max_lag");
  j["inference"].erase("regression_lag");
  j["inference"].erase("seed");
  return j;
}

Json to_json(const BenchResult& result, BenchSuite suite) {
  Json cells = Json::array();
  for (const auto& c : result.cells) cells.push_back(cell_json(c, suite));
  Json average = cell_json(result.average, suite);
  average.erase("lag_fraction");
  average.erase("max_lag");
  return Json{{"cells", std::move(cells)}, {"average", std::move(average)}};
}

std::string render(const Json& report) { return report.dump(2) + "\n"; }

}  // namespace vlgc
