#include "vlgc/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace vlgc {

TimeSeries::TimeSeries(std::string name, std::vector<double> values)
    : name_(std::move(name)), values_(std::move(values)) {
  if (values_.empty()) throw InvalidInput("time series '" + name_ + "' is empty");
  for (std::size_t t = 0; t < values_.size(); ++t) {
    if (!std::isfinite(values_[t])) {
      throw InvalidInput("time series '" + name_ + "' has a non-finite value at index " +
                         std::to_string(t));
    }
  }
}

TimeSeriesSet::TimeSeriesSet(std::vector<TimeSeries> members) : members_(std::move(members)) {
  if (members_.empty()) throw InvalidInput("time series set is empty");
  const std::size_t len = members_.front().size();
  for (const auto& m : members_) {
    if (m.size() != len) {
      throw InvalidInput("time series '" + m.name() + "' has length " + std::to_string(m.size()) +
                         ", expected " + std::to_string(len));
    }
  }
}

std::vector<std::string> TimeSeriesSet::names() const {
  std::vector<std::string> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.name());
  return out;
}

std::size_t TimeSeriesSet::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].name() == name) return i;
  }
  throw InvalidInput("no series named '" + name + "'");
}

TimeSeriesSet TimeSeriesSet::without(std::size_t index) const {
  if (members_.size() < 2) throw InvalidInput("cannot remove the only member of a set");
  if (index >= members_.size()) throw InvalidInput("member index out of range");
  std::vector<TimeSeries> rest;
  rest.reserve(members_.size() - 1);
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i != index) rest.push_back(members_[i]);
  }
  return TimeSeriesSet(std::move(rest));
}

Interval Interval::bounded(std::size_t length) const {
  if (length == 0) throw InvalidInput("interval over an empty series");
  const std::size_t end = last.value_or(length - 1);
  if (first > end) throw InvalidInput("interval start exceeds its end");
  if (end >= length) throw InvalidInput("interval exceeds series length");
  return Interval{first, end};
}

TimeSeries aggregate(std::span<const TimeSeries> members) {
  if (members.empty()) throw InvalidInput("cannot aggregate an empty set");
  const std::size_t len = members.front().size();
  for (const auto& m : members) {
    if (m.size() != len) throw InvalidInput("cannot aggregate series of unequal length");
  }
  // Summing in sorted order makes the result independent of member order, bit for bit.
  std::vector<double> mean(len);
  std::vector<double> column(members.size());
  const double n = static_cast<double>(members.size());
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t k = 0; k < members.size(); ++k) column[k] = members[k][t];
    std::sort(column.begin(), column.end());
    mean[t] = std::accumulate(column.begin(), column.end(), 0.0) / n;
  }
  return TimeSeries("agg", std::move(mean));
}

TimeSeries aggregate(const TimeSeriesSet& set) { return aggregate(std::span<const TimeSeries>(set.members())); }

double bounded_distance(double a, double b, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidInput("distance scale must be positive");
  return std::min(std::abs(a - b) / scale, 1.0);
}

double pooled_range(std::span<const double> a, std::span<const double> b) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : a) lo = std::min(lo, v), hi = std::max(hi, v);
  for (double v : b) lo = std::min(lo, v), hi = std::max(hi, v);
  const double range = hi - lo;
  return range > 0.0 ? range : 1.0;
}

bool epsilon_converged(const TimeSeries& q, const TimeSeries& u, double eps, const Interval& iv,
                       double scale) {
  if (!(eps > 0.0 && eps <= 0.5)) throw InvalidInput("eps must lie in (0, 1/2]");
  const Interval b = iv.bounded(std::min(q.size(), u.size()));
  for (std::size_t t = b.first; t <= *b.last; ++t) {
    if (bounded_distance(q[t], u[t], scale) > eps) return false;
  }
  return true;
}

bool epsilon_converged(const TimeSeries& q, const TimeSeries& u, double eps, const Interval& iv) {
  return epsilon_converged(q, u, eps, iv, pooled_range(q.values(), u.values()));
}

bool is_coordination_set(const TimeSeriesSet& set, double eps, const Interval& iv, double scale) {
  const TimeSeries agg = aggregate(set);
  return std::all_of(set.begin(), set.end(), [&](const TimeSeries& m) {
    return epsilon_converged(m, agg, eps, iv, scale);
  });
}

double mean_similarity(const TimeSeries& u, const TimeSeries& v, double scale) {
  if (u.size() != v.size()) throw InvalidInput("similarity needs series of equal length");
  double sum = 0.0;
  for (std::size_t t = 0; t < u.size(); ++t) sum += 1.0 - bounded_distance(u[t], v[t], scale);
  return sum / static_cast<double>(u.size());
}

double mean_similarity(const TimeSeries& u, const TimeSeries& v) {
  return mean_similarity(u, v, pooled_range(u.values(), v.values()));
}

}  // namespace vlgc
