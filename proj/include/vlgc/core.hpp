#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace vlgc {

/// Raised for any caller-supplied value that violates an operation's contract.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief A named, uniformly indexed real-valued series.
 *
 * Storage is 0-based: element t of the series is the sample at time step t+1
 * in the usual 1-based notation. Values are validated once on construction
 * (non-empty, all finite) and never change afterwards.
 */
class TimeSeries {
 public:
  TimeSeries(std::string name, std::vector<double> values);
  explicit TimeSeries(std::vector<double> values) : TimeSeries(std::string{}, std::move(values)) {}

  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t t) const { return values_[t]; }

  [[nodiscard]] TimeSeries renamed(std::string name) const { return TimeSeries(std::move(name), values_); }

  friend bool operator==(const TimeSeries&, const TimeSeries&) = default;

 private:
  std::string name_;
  std::vector<double> values_;
};

/// Non-empty collection of series that all share one length.
class TimeSeriesSet {
 public:
  explicit TimeSeriesSet(std::vector<TimeSeries> members);

  [[nodiscard]] std::size_t size() const noexcept { return members_.size(); }
  [[nodiscard]] std::size_t length() const noexcept { return members_.front().size(); }
  [[nodiscard]] const TimeSeries& operator[](std::size_t i) const { return members_[i]; }
  [[nodiscard]] const std::vector<TimeSeries>& members() const noexcept { return members_; }
  [[nodiscard]] auto begin() const noexcept { return members_.begin(); }
  [[nodiscard]] auto end() const noexcept { return members_.end(); }

  [[nodiscard]] std::vector<std::string> names() const;
  /// Index of the member with this name; throws InvalidInput when absent.
  [[nodiscard]] std::size_t index_of(const std::string& name) const;
  /// Every member except the one at `index`. Requires at least two members.
  [[nodiscard]] TimeSeriesSet without(std::size_t index) const;

 private:
  std::vector<TimeSeries> members_;
};

/// Closed 0-based index interval [first, last]; an empty `last` runs to the end of the series.
struct Interval {
  std::size_t first = 0;
  std::optional<std::size_t> last;

  /// Resolves the open end against a series length and checks bounds.
  [[nodiscard]] Interval bounded(std::size_t length) const;
};

/// Per-step arithmetic mean of the members.
[[nodiscard]] TimeSeries aggregate(const TimeSeriesSet& set);
[[nodiscard]] TimeSeries aggregate(std::span<const TimeSeries> members);

/// Scale-normalised absolute difference clamped into [0, 1].
[[nodiscard]] double bounded_distance(double a, double b, double scale);

/// Min-to-max range of the two series pooled together; 1 when the pooled data are constant.
[[nodiscard]] double pooled_range(std::span<const double> a, std::span<const double> b);

[[nodiscard]] bool epsilon_converged(const TimeSeries& q, const TimeSeries& u, double eps,
                                     const Interval& iv, double scale);
[[nodiscard]] bool epsilon_converged(const TimeSeries& q, const TimeSeries& u, double eps,
                                     const Interval& iv);

/// True iff every member eps-converges toward the aggregate of the set on `iv`.
[[nodiscard]] bool is_coordination_set(const TimeSeriesSet& set, double eps, const Interval& iv,
                                       double scale);

/// Average of (1 - bounded_distance) over all time steps.
[[nodiscard]] double mean_similarity(const TimeSeries& u, const TimeSeries& v, double scale);
[[nodiscard]] double mean_similarity(const TimeSeries& u, const TimeSeries& v);

}  // namespace vlgc
