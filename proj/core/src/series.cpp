#include "darksra/series.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "darksra/errors.hpp"

namespace darksra {

std::string_view to_string(Source source) noexcept {
  return source == Source::simulated ? "simulated" : "measured";
}

TimeTagSeries::TimeTagSeries(std::vector<std::int64_t> tags, double unit_seconds,
                             Provenance provenance)
    : tags_(std::move(tags)), unit_(unit_seconds), provenance_(std::move(provenance)) {
  if (!(unit_ > 0.0) || !std::isfinite(unit_)) {
    throw ParameterError("time unit must be positive and finite, got " + std::to_string(unit_));
  }
  const auto it = std::adjacent_find(tags_.begin(), tags_.end(), std::greater<>{});
  if (it != tags_.end()) {
    throw OrderingError(static_cast<std::size_t>(std::distance(tags_.begin(), it)) + 1);
  }
}

double compensated_sum(std::span<const double> values) noexcept {
  double sum = 0.0;
  double carry = 0.0;
  for (const double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

IntervalSeries::IntervalSeries(std::vector<double> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (!(intervals_[i] >= 0.0) || !std::isfinite(intervals_[i])) {
      throw ParameterError("interval " + std::to_string(i) + " is negative or not finite");
    }
  }
}

double IntervalSeries::total() const noexcept { return compensated_sum(intervals_); }

double IntervalSeries::mean() const {
  if (intervals_.empty()) throw InsufficientDataError("mean of an empty interval series");
  return total() / static_cast<double>(intervals_.size());
}

IntervalSeries IntervalSeries::head(std::size_t count) const {
  const auto n = std::min(count, intervals_.size());
  return IntervalSeries(std::vector<double>(intervals_.begin(),
                                            intervals_.begin() + static_cast<std::ptrdiff_t>(n)));
}

RankedIntervals::RankedIntervals(std::vector<double> ranked) : ranked_(std::move(ranked)) {
  if (ranked_.empty()) throw InsufficientDataError("ranked series needs at least one interval");
  for (std::size_t i = 0; i < ranked_.size(); ++i) {
    if (!(ranked_[i] >= 0.0) || !std::isfinite(ranked_[i])) {
      throw ParameterError("interval " + std::to_string(i) + " is negative or not finite");
    }
    if (i > 0 && ranked_[i] > ranked_[i - 1]) {
      throw OrderingError(i);
    }
  }
  mean_ = compensated_sum(ranked_) / static_cast<double>(ranked_.size());
}

double RankedIntervals::at_rank(std::size_t rank) const {
  if (rank < 1 || rank > ranked_.size()) {
    throw RangeError("rank " + std::to_string(rank) + " outside [1, " +
                     std::to_string(ranked_.size()) + "]");
  }
  return ranked_[rank - 1];
}

IntervalSeries intervals_from_tags(const TimeTagSeries& tags) {
  const auto t = tags.tags();
  if (t.size() < 2) {
    throw InsufficientDataError("need at least 2 time tags to form intervals, got " +
                                std::to_string(t.size()));
  }
  std::vector<double> out(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    out[i] = static_cast<double>(t[i + 1] - t[i]) * tags.unit_seconds();
  }
  return IntervalSeries(std::move(out));
}

RankedIntervals rank_descending(const IntervalSeries& intervals) {
  if (intervals.n_points() == 0) throw InsufficientDataError("cannot rank an empty interval series");
  std::vector<double> sorted(intervals.values().begin(), intervals.values().end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>{});
  return RankedIntervals(std::move(sorted));
}

}  // namespace darksra
