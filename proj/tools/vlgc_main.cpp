#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "vlgc/bench.hpp"
#include "vlgc/csv.hpp"
#include "vlgc/inference.hpp"
#include "vlgc/report.hpp"
#include "vlgc/synth.hpp"

namespace {

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  double max_lag = 0.2;
  double sigma = 0.5;
  double alpha = 0.01;
  std::string variant = "all";
  std::size_t n_boot = 500;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  bool no_independence_gate = false;
  bool no_emulation_gate = false;
  bool cause_only_scan = false;
  std::string json_path;
};

void add_common(CLI::App* cmd, CommonFlags& f, bool with_max_lag = true) {
  if (with_max_lag) {
    cmd->add_option("--max-lag", f.max_lag, "Largest lag: a fraction of T if below 1, else time steps")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  cmd->add_option("--sigma", f.sigma, "Emulation threshold on the sign similarity")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--alpha", f.alpha, "Significance level of the F-tests and the independence scan")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd->add_option("--variant", f.variant, "all (BIC and F-test) or no-ftest (BIC only)")
      ->check(CLI::IsMember({"all", "no-ftest"}))
      ->capture_default_str();
  cmd->add_option("--n-boot", f.n_boot, "Permutations for the independence scan")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "Master seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "Worker threads, 0 for all cores")->capture_default_str();
  cmd->add_flag("--no-independence-gate", f.no_independence_gate, "Skip the kernel independence scan");
  cmd->add_flag("--no-emulation-gate", f.no_emulation_gate, "Do not require sim_value >= sigma");
  cmd->add_flag("--cause-only-scan", f.cause_only_scan,
                "Scan shifts of the raw cause only, not of the DTW reconstruction");
  cmd->add_option("--json", f.json_path, "Write the machine-readable report to this path");
}

std::size_t resolve_max_lag(double requested, std::size_t length) {
  if (requested < 1.0) return vlgc::lag_from_fraction(requested, length);
  if (requested != std::floor(requested)) throw UsageError("--max-lag >= 1 must be a whole number of steps");
  return static_cast<std::size_t>(requested);
}

/// Drops the frozen segment when the requested length cannot contain it.
void fit_segment(vlgc::GeneratorSpec& spec) {
  if (spec.constant_segment && *spec.constant_segment->last >= spec.length) spec.constant_segment.reset();
}

vlgc::InferenceConfig make_config(const CommonFlags& f, std::size_t length) {
  if (!(f.sigma > 0.0)) throw UsageError("--sigma must lie in (0, 1]");
  if (!(f.alpha > 0.0 && f.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");
  vlgc::InferenceConfig cfg;
  cfg.max_lag = length ? resolve_max_lag(f.max_lag, length) : 1;
  cfg.sigma = f.sigma;
  cfg.alpha = f.alpha;
  cfg.variant = f.variant == "all" ? vlgc::Variant::All : vlgc::Variant::NoFTest;
  cfg.n_boot = f.n_boot;
  cfg.seed = f.seed;
  cfg.threads = f.threads;
  cfg.independence_gate = !f.no_independence_gate;
  cfg.emulation_gate = !f.no_emulation_gate;
  cfg.scan_reconstruction = !f.cause_only_scan;
  return cfg;
}

void emit(const CommonFlags& f, const vlgc::Json& report) {
  if (f.json_path.empty()) return;
  std::ofstream out(f.json_path, std::ios::binary);
  if (!out) throw vlgc::InvalidInput("cannot write '" + f.json_path + "'");
  out << vlgc::render(report);
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

class Stopwatch {
 public:
  ~Stopwatch() {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
    std::cout << "elapsed: " << fmt(dt.count(), 2) << " s\n";
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int run_test_pair(const std::string& input, const std::string& cause, const std::string& effect,
                  const CommonFlags& flags) {
  Stopwatch timer;
  const vlgc::TimeSeriesSet data = vlgc::read_csv_file(input);
  if (data.size() < 2) throw vlgc::InvalidInput("test-pair needs at least two columns");
  const std::size_t ci = cause.empty() ? 0 : data.index_of(cause);
  const std::size_t ei = effect.empty() ? 1 : data.index_of(effect);
  if (ci == ei) throw UsageError("cause and effect must be different columns");
  const vlgc::InferenceConfig cfg = make_config(flags, data.length());
  const vlgc::CausalVerdict v = vlgc::pairwise_cause(data[ci], data[ei], cfg);

  std::cout << data[ci].name() << " -> " << data[ei].name() << ": " << vlgc::to_string(v.label) << "\n"
            << "  max_lag " << cfg.max_lag << " (regression lag " << vlgc::regression_lag_for(cfg, data.length())
            << "), T " << data.length() << "\n"
            << "  sim_value " << fmt(v.sim_value()) << "\n"
            << "  BIC own-past " << fmt(v.fixed.bic_y, 2) << ", fixed-lag " << fmt(v.fixed.bic_yx, 2)
            << ", variable-lag " << fmt(v.variable.bic_yx, 2) << "\n"
            << "  F-test p fixed " << fmt(v.fixed.comparison.p_value, 6) << ", variable "
            << fmt(v.variable.comparison.p_value, 6) << "\n";
  if (v.independence) {
    std::cout << "  independence scan: " << (v.independence->dependent ? "dependent" : "no dependence")
              << " (p " << fmt(v.independence->p_value, 4) << ", best shift " << v.independence->best_shift
              << ")\n";
  }
  vlgc::Json report{{"command", "test-pair"},
                    {"input", input},
                    {"cause", data[ci].name()},
                    {"effect", data[ei].name()},
                    {"length", data.length()},
                    {"config", vlgc::to_json(cfg, data.length())},
                    {"verdict", vlgc::to_json(v)}};
  emit(flags, report);
  return 0;
}

int run_infer_graph(const std::string& input, const CommonFlags& flags) {
  Stopwatch timer;
  const vlgc::TimeSeriesSet data = vlgc::read_csv_file(input);
  const vlgc::InferenceConfig cfg = make_config(flags, data.length());
  const vlgc::CausalGraph graph = vlgc::infer_graph(data, cfg);
  std::cout << graph.edges.size() << " edge(s) among " << graph.nodes.size() << " series\n";
  for (const auto& e : graph.edges) {
    std::cout << "  " << e.from << " -> " << e.to << "  " << vlgc::to_string(e.label) << "  score "
              << fmt(e.score, 2) << "  sim " << fmt(e.sim_value, 3) << "\n";
  }
  emit(flags, vlgc::Json{{"command", "infer-graph"},
                         {"input", input},
                         {"length", data.length()},
                         {"config", vlgc::to_json(cfg, data.length())},
                         {"graph", vlgc::to_json(graph)}});
  return 0;
}

int run_initiators(const std::string& input, const CommonFlags& flags) {
  Stopwatch timer;
  const vlgc::TimeSeriesSet data = vlgc::read_csv_file(input);
  if (data.size() < 3) throw vlgc::InvalidInput("initiators needs at least three columns");
  const vlgc::InferenceConfig cfg = make_config(flags, data.length());
  const auto scores = vlgc::initiator_scores(data, cfg);
  std::vector<std::size_t> order(scores.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a].score > scores[b].score; });
  std::cout << "rank  score   label          name\n";
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& s = scores[order[r]];
    std::cout << std::setw(4) << r + 1 << "  " << fmt(s.score, 3) << "   " << std::left << std::setw(13)
              << vlgc::to_string(s.label) << std::right << "  " << s.name << "\n";
  }
  emit(flags, vlgc::Json{{"command", "initiators"},
                         {"input", input},
                         {"length", data.length()},
                         {"config", vlgc::to_json(cfg, data.length())},
                         {"scores", vlgc::to_json(scores)}});
  return 0;
}

int run_bench(vlgc::BenchConfig bench, const std::string& model, const CommonFlags& flags) {
  Stopwatch timer;
  bench.generator.model = model == "arma" ? vlgc::BaseModel::Arma : vlgc::BaseModel::Normal;
  bench.inference = make_config(flags, 0);
  bench.seed = flags.seed;
  const vlgc::BenchResult result = vlgc::run_bench(bench);

  auto line = [&](const std::string& label, const vlgc::BenchCell& c) {
    std::cout << std::left << std::setw(10) << label << std::right;
    switch (bench.suite) {
      case vlgc::BenchSuite::Pairwise:
        std::cout << "causal " << fmt(c.causal_accuracy.mean, 3) << " +/- " << fmt(c.causal_accuracy.half_width, 3)
                  << "   no-cause " << fmt(c.nocause_accuracy.mean, 3) << " +/- "
                  << fmt(c.nocause_accuracy.half_width, 3);
        break;
      case vlgc::BenchSuite::Group:
        std::cout << "precision " << fmt(c.precision.mean, 3) << "  recall " << fmt(c.recall.mean, 3) << "  F1 "
                  << fmt(c.f1.mean, 3) << " +/- " << fmt(c.f1.half_width, 3);
        break;
      case vlgc::BenchSuite::Initiator:
        std::cout << "top-1 " << fmt(c.top_hit.mean, 3) << " +/- " << fmt(c.top_hit.half_width, 3);
        break;
    }
    std::cout << "  (n=" << c.trials << ")\n";
  };
  for (const auto& c : result.cells) line(fmt(c.lag_fraction, 1) + "T", c);
  line("average", result.average);
  emit(flags, vlgc::Json{{"command", "bench"}, {"config", vlgc::to_json(bench)}, {"result", vlgc::to_json(result, bench.suite)}});
  return 0;
}

int run_synth(const std::string& kind, const std::string& model, vlgc::GeneratorSpec spec, std::uint64_t seed,
              std::size_t members, const std::string& out) {
  spec.model = model == "arma" ? vlgc::BaseModel::Arma : vlgc::BaseModel::Normal;
  spec.seed = seed;
  std::vector<vlgc::TimeSeries> series;
  if (kind == "pair") {
    const auto p = vlgc::gen_causal_pair(spec);
    series = {p.cause, p.effect};
  } else if (kind == "independent") {
    const auto [x, y] = vlgc::gen_independent_pair(spec);
    series = {x, y};
  } else if (kind == "group") {
    series = vlgc::gen_group(spec).set.members();
  } else {
    const auto planted = vlgc::gen_planted_initiator(spec, members);
    series = planted.set.members();
    std::cerr << "planted initiator: " << planted.set[planted.initiator].name() << "\n";
  }
  const vlgc::TimeSeriesSet set(std::move(series));
  if (out.empty() || out == "-") {
    vlgc::write_csv(std::cout, set);
  } else {
    vlgc::write_csv_file(out, set);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variable-lag Granger causality: pairwise tests, causal graphs and initiator scores"};
  app.require_subcommand(1);

  CommonFlags pair_flags, graph_flags, init_flags, bench_flags;
  std::string pair_input, graph_input, init_input, cause, effect;

  auto* pair = app.add_subcommand("test-pair", "Test whether one column causes another");
  pair->add_option("input", pair_input, "CSV file with named columns")->required();
  pair->add_option("--cause", cause, "Cause column (default: first)");
  pair->add_option("--effect", effect, "Effect column (default: second)");
  add_common(pair, pair_flags);

  auto* graph = app.add_subcommand("infer-graph", "Infer causal edges between all ordered column pairs");
  graph->add_option("input", graph_input, "CSV file with named columns")->required();
  add_common(graph, graph_flags);

  auto* init = app.add_subcommand("initiators", "Score each column as the initiator of the group");
  init->add_option("input", init_input, "CSV file with at least three named columns")->required();
  add_common(init, init_flags);

  vlgc::BenchConfig bench_cfg;
  std::string suite = "pairwise", bench_model = "normal";
  auto* bench = app.add_subcommand("bench", "Run the synthetic benchmark over the max-lag grid");
  bench->add_option("--suite", suite, "pairwise, group or initiator")
      ->check(CLI::IsMember({"pairwise", "group", "initiator"}))
      ->capture_default_str();
  bench->add_option("--model", bench_model, "normal or arma")
      ->check(CLI::IsMember({"normal", "arma"}))
      ->capture_default_str();
  bench->add_option("--trials", bench_cfg.trials, "Trials per grid cell")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
      ->capture_default_str();
  bench->add_option("--lag-fractions", bench_cfg.lag_fractions, "max_lag grid as fractions of T")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  bench->add_option("--members", bench_cfg.group_members, "Series per planted group (initiator suite)")
      ->check(CLI::Range(std::size_t{3}, std::size_t{1000}))
      ->capture_default_str();
  bench->add_option("--length", bench_cfg.generator.length, "Series length")->capture_default_str();
  add_common(bench, bench_flags, false);

  vlgc::GeneratorSpec synth_spec;
  std::string kind = "pair", synth_model = "normal", synth_out;
  std::uint64_t synth_seed = 0;
  std::size_t synth_members = 8;
  auto* synth = app.add_subcommand("synth", "Write a synthetic data set as CSV");
  synth->add_option("--kind", kind, "pair, independent, group or planted")
      ->check(CLI::IsMember({"pair", "independent", "group", "planted"}))
      ->capture_default_str();
  synth->add_option("--model", synth_model, "normal or arma")
      ->check(CLI::IsMember({"normal", "arma"}))
      ->capture_default_str();
  synth->add_option("--length", synth_spec.length, "Series length")->capture_default_str();
  synth->add_option("--members", synth_members, "Series in a planted group")->capture_default_str();
  synth->add_option("--seed", synth_seed, "Seed")->capture_default_str();
  synth->add_option("--out", synth_out, "Output path (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*pair) return run_test_pair(pair_input, cause, effect, pair_flags);
    if (*graph) return run_infer_graph(graph_input, graph_flags);
    if (*init) return run_initiators(init_input, init_flags);
    if (*bench) {
      bench_cfg.suite = suite == "group"       ? vlgc::BenchSuite::Group
                        : suite == "initiator" ? vlgc::BenchSuite::Initiator
                                               : vlgc::BenchSuite::Pairwise;
      fit_segment(bench_cfg.generator);
      return run_bench(bench_cfg, bench_model, bench_flags);
    }
    if (*synth) {
      fit_segment(synth_spec);
      return run_synth(kind, synth_model, synth_spec, synth_seed, synth_members, synth_out);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
