#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace darksra {

enum class Source { measured, simulated };

std::string_view to_string(Source source) noexcept;

/// Where a tag series came from. `extra` holds additional key=value
/// metadata (simulation parameters, instrument notes) in file order.
struct Provenance {
  Source source = Source::measured;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, std::string>> extra;

  bool operator==(const Provenance&) const = default;
};

/// Event timestamps as integer ticks of a base unit. Immutable; the
/// constructor rejects decreasing sequences and nonpositive units.
class TimeTagSeries {
 public:
  TimeTagSeries(std::vector<std::int64_t> tags, double unit_seconds,
                Provenance provenance = {});

  std::span<const std::int64_t> tags() const noexcept { return tags_; }
  double unit_seconds() const noexcept { return unit_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  std::size_t size() const noexcept { return tags_.size(); }

  bool operator==(const TimeTagSeries&) const = default;

 private:
  std::vector<std::int64_t> tags_;
  double unit_;
  Provenance provenance_;
};

/// Durations between consecutive events, in seconds. Zero-length intervals
/// (coincident tags) are legal.
class IntervalSeries {
 public:
  explicit IntervalSeries(std::vector<double> intervals);

  std::span<const double> values() const noexcept { return intervals_; }
  std::size_t n_points() const noexcept { return intervals_.size(); }

  /// Compensated sum of all intervals.
  double total() const noexcept;
  /// Arithmetic mean; requires at least one interval.
  double mean() const;

  /// The first `count` intervals (or all of them when fewer exist).
  IntervalSeries head(std::size_t count) const;

  bool operator==(const IntervalSeries&) const = default;

 private:
  std::vector<double> intervals_;
};

/// Intervals sorted in descending order, x_1 being the largest.
class RankedIntervals {
 public:
  /// Validates that `ranked` is nonincreasing and nonnegative.
  explicit RankedIntervals(std::vector<double> ranked);

  std::span<const double> ranked() const noexcept { return ranked_; }
  std::size_t n_points() const noexcept { return ranked_.size(); }
  double mean_interval() const noexcept { return mean_; }

  /// Rank is 1-based: `at_rank(1)` is the maximum.
  double at_rank(std::size_t rank) const;

  bool operator==(const RankedIntervals&) const = default;

 private:
  std::vector<double> ranked_;
  double mean_;
};

/// intervals[i] = (tags[i+1] - tags[i]) * unit. Needs at least two tags.
IntervalSeries intervals_from_tags(const TimeTagSeries& tags);

/// Descending sort of the interval multiset. Ties carry no secondary key.
RankedIntervals rank_descending(const IntervalSeries& intervals);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values) noexcept;

}  // namespace darksra
