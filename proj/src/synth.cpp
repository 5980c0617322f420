#include "vlgc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>

#include "vlgc/random.hpp"

namespace vlgc {

namespace {

// Sub-seed tags; distinct per generator role.
enum : std::uint64_t { kBaseTag = 1, kFollowerTag = 2, kPairTag = 3, kGroupTag = 4, kPlantTag = 5 };

double stddev(std::span<const double> v) {
  const double n = static_cast<double>(v.size());
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : v) ss += (a - mean) * (a - mean);
  return v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

/// Piecewise-constant lag per time step with a random number of change points.
std::vector<std::size_t> draw_lags(const GeneratorSpec& spec, Engine& engine) {
  const std::size_t len = spec.length;
  std::uniform_int_distribution<std::size_t> count(spec.min_change_points, spec.max_change_points);
  std::uniform_int_distribution<std::size_t> lag(spec.min_lag, spec.max_lag);
  std::set<std::size_t> cuts;
  const std::size_t wanted = std::min(count(engine), len - 1);
  std::uniform_int_distribution<std::size_t> where(1, len - 1);
  while (cuts.size() < wanted) cuts.insert(where(engine));

  std::vector<std::size_t> lags(len);
  std::size_t current = lag(engine);
  for (std::size_t t = 0; t < len; ++t) {
    if (cuts.count(t)) current = lag(engine);
    lags[t] = current;
  }
  return lags;
}

TimeSeries shifted(const TimeSeries& s, std::size_t lag) {
  std::vector<double> out(s.size());
  for (std::size_t t = 0; t < s.size(); ++t) out[t] = s[t >= lag ? t - lag : 0];
  return TimeSeries(s.name(), std::move(out));
}

}  // namespace

void validate(const GeneratorSpec& spec) {
  if (spec.length < 2) throw InvalidInput("generator length must be at least 2");
  if (spec.min_lag > spec.max_lag) throw InvalidInput("generator lag range is empty");
  if (spec.max_lag >= spec.length) throw InvalidInput("generator lags must be shorter than the series");
  if (spec.min_change_points > spec.max_change_points) throw InvalidInput("change-point range is empty");
  if (!(spec.noise_scale > 0.0)) throw InvalidInput("noise_scale must be positive");
  if (!(spec.follower_noise >= 0.0)) throw InvalidInput("follower_noise must be non-negative");
  if (spec.constant_segment) (void)spec.constant_segment->bounded(spec.length);
}

GeneratorSpec with_seed(GeneratorSpec spec, std::uint64_t seed) {
  spec.seed = seed;
  return spec;
}

std::vector<double> arma_recursion(std::span<const double> innovations) {
  std::vector<double> out(innovations.size());
  for (std::size_t t = 0; t < innovations.size(); ++t) {
    out[t] = t == 0 ? innovations[0] : 0.9 * innovations[t] + 0.1 * out[t - 1];
  }
  return out;
}

TimeSeries gen_base(const GeneratorSpec& spec) {
  validate(spec);
  Engine engine(derive_seed(spec.seed, {kBaseTag}));
  std::normal_distribution<double> draw(0.0, spec.noise_scale);
  std::vector<double> values(spec.length);
  for (double& v : values) v = draw(engine);
  if (spec.model == BaseModel::Arma) values = arma_recursion(values);
  return TimeSeries("X", std::move(values));
}

Follower gen_follower(const TimeSeries& leader, const GeneratorSpec& spec) {
  validate(spec);
  if (leader.size() != spec.length) throw InvalidInput("leader length differs from the generator length");
  const std::size_t len = spec.length;
  Engine engine(derive_seed(spec.seed, {kFollowerTag}));
  const std::vector<std::size_t> lags = draw_lags(spec, engine);

  std::vector<std::size_t> source(len);
  for (std::size_t t = 0; t < len; ++t) {
    const std::size_t wanted = t >= lags[t] ? t - lags[t] : 0;
    source[t] = t == 0 ? wanted : std::max(source[t - 1], wanted);
  }

  const double noise_sd = spec.follower_noise * stddev(leader.values());
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<double> values(len);
  for (std::size_t t = 0; t < len; ++t) {
    const double e = noise(engine);
    values[t] = leader[source[t]] + noise_sd * e;
  }

  if (spec.constant_segment) {
    const Interval seg = spec.constant_segment->bounded(len);
    for (std::size_t t = seg.first + 1; t <= *seg.last; ++t) {
      values[t] = values[seg.first];
      source[t] = source[seg.first];
    }
  }

  Follower out{TimeSeries("Y", std::move(values)), DelaySequence(len)};
  for (std::size_t t = 0; t < len; ++t) out.delays[t] = static_cast<std::ptrdiff_t>(t - source[t]);
  return out;
}

std::pair<TimeSeries, TimeSeries> gen_independent_pair(const GeneratorSpec& spec) {
  TimeSeries x = gen_base(with_seed(spec, derive_seed(spec.seed, {kPairTag, 0})));
  TimeSeries y = gen_base(with_seed(spec, derive_seed(spec.seed, {kPairTag, 1})));
  return {std::move(x), y.renamed("Y")};
}

CausalPair gen_causal_pair(const GeneratorSpec& spec) {
  TimeSeries x = gen_base(with_seed(spec, derive_seed(spec.seed, {kPairTag, 0})));
  Follower f = gen_follower(x, with_seed(spec, derive_seed(spec.seed, {kPairTag, 2})));
  return {std::move(x), std::move(f.series), std::move(f.delays)};
}

bool GroundTruth::contains(const std::string& from, const std::string& to) const {
  return std::any_of(edges.begin(), edges.end(), [&](const TruthEdge& e) { return e.from == from && e.to == to; });
}

GroupInstance gen_group(const GeneratorSpec& spec) {
  validate(spec);
  constexpr std::size_t kSources = 3;
  std::vector<TimeSeries> sources;
  std::vector<TimeSeries> followers;
  GroundTruth truth;
  for (std::size_t i = 0; i < kSources; ++i) {
    const std::string idx = std::to_string(i + 1);
    sources.push_back(gen_base(with_seed(spec, derive_seed(spec.seed, {kGroupTag, 0, i}))).renamed("X" + idx));
    Follower f = gen_follower(sources.back(), with_seed(spec, derive_seed(spec.seed, {kGroupTag, 1, i})));
    followers.push_back(f.series.renamed("Y" + idx));
    truth.edges.push_back({"X" + idx, "Y" + idx, std::move(f.delays)});
  }

  Engine engine(derive_seed(spec.seed, {kGroupTag, 2}));
  std::uniform_int_distribution<std::size_t> lag(spec.min_lag, spec.max_lag);
  std::vector<TimeSeries> shifted_sources;
  std::vector<std::size_t> fixed_lags;
  for (const auto& s : sources) {
    fixed_lags.push_back(lag(engine));
    shifted_sources.push_back(shifted(s, fixed_lags.back()));
  }

  std::vector<TimeSeries> members = sources;
  members.insert(members.end(), followers.begin(), followers.end());
  std::normal_distribution<double> noise(0.0, 1.0);
  for (std::size_t i = 0; i < kSources; ++i) {
    for (std::size_t j = i + 1; j < kSources; ++j) {
      const std::string name = "Y" + std::to_string(i + 1) + std::to_string(j + 1);
      const std::vector<TimeSeries> parts{shifted_sources[i], shifted_sources[j]};
      const TimeSeries mean = aggregate(parts);
      std::vector<double> mix(mean.values().begin(), mean.values().end());
      const double noise_sd = spec.follower_noise * stddev(mix);
      for (double& v : mix) v += noise_sd * noise(engine);
      members.emplace_back(name, std::move(mix));
      for (std::size_t k : {i, j}) {
        DelaySequence d(spec.length);
        for (std::size_t t = 0; t < spec.length; ++t) {
          d[t] = static_cast<std::ptrdiff_t>(std::min(t, fixed_lags[k]));
        }
        truth.edges.push_back({sources[k].name(), name, std::move(d)});
      }
    }
  }
  return {TimeSeriesSet(std::move(members)), std::move(truth)};
}

PlantedGroup gen_planted_initiator(const GeneratorSpec& spec, std::size_t members) {
  validate(spec);
  if (members < 3) throw InvalidInput("a planted group needs at least three members");
  const TimeSeries steps = gen_base(with_seed(spec, derive_seed(spec.seed, {kPlantTag, 0})));
  std::vector<double> path(steps.size());
  std::partial_sum(steps.values().begin(), steps.values().end(), path.begin());
  if (spec.constant_segment) {
    const Interval seg = spec.constant_segment->bounded(spec.length);
    std::fill(path.begin() + static_cast<std::ptrdiff_t>(seg.first) + 1,
              path.begin() + static_cast<std::ptrdiff_t>(*seg.last) + 1, path[seg.first]);
  }
  const TimeSeries source("X", std::move(path));

  GeneratorSpec follow = spec;
  follow.constant_segment.reset();
  Engine engine(derive_seed(spec.seed, {kPlantTag, 1}));
  std::uniform_int_distribution<std::size_t> where(0, members - 1);
  const std::size_t initiator = where(engine);

  std::vector<TimeSeries> out;
  std::size_t follower = 0;
  for (std::size_t i = 0; i < members; ++i) {
    const std::string name = "S" + std::to_string(i + 1);
    if (i == initiator) {
      out.push_back(source.renamed(name));
    } else {
      Follower f = gen_follower(source, with_seed(follow, derive_seed(spec.seed, {kPlantTag, 2, follower++})));
      out.push_back(f.series.renamed(name));
    }
  }
  return {TimeSeriesSet(std::move(out)), initiator};
}

EdgeMetrics eval_edges(const CausalGraph& predicted, const GroundTruth& truth) {
  std::set<std::pair<std::string, std::string>> pred;
  std::set<std::pair<std::string, std::string>> real;
  for (const auto& e : predicted.edges) pred.emplace(e.from, e.to);
  for (const auto& e : truth.edges) real.emplace(e.from, e.to);

  EdgeMetrics m;
  for (const auto& e : pred) {
    if (real.count(e)) {
      ++m.true_positives;
    } else {
      ++m.false_positives;
    }
  }
  m.false_negatives = real.size() - m.true_positives;
  if (!pred.empty()) m.precision = static_cast<double>(m.true_positives) / static_cast<double>(pred.size());
  if (!real.empty()) m.recall = static_cast<double>(m.true_positives) / static_cast<double>(real.size());
  if (m.precision + m.recall > 0.0) m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace vlgc
