#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "darksra/series.hpp"

namespace darksra {

/// Half-open binning: bin k covers [k * bin_width, (k + 1) * bin_width).
/// Values at or above range_max are overflow; negative values underflow.
struct IntervalHistogram {
  double bin_width = 0.0;
  double range_max = 0.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t underflow = 0;
  std::uint64_t overflow = 0;

  double bin_start(std::size_t k) const noexcept { return static_cast<double>(k) * bin_width; }
  double bin_end(std::size_t k) const noexcept { return static_cast<double>(k + 1) * bin_width; }
  double bin_center(std::size_t k) const noexcept {
    return (static_cast<double>(k) + 0.5) * bin_width;
  }
  std::uint64_t total() const noexcept;
};

/// `range_max` is rounded up to a whole number of bins.
IntervalHistogram build_histogram(const IntervalSeries& intervals, double bin_width,
                                  double range_max);

struct BinningDefaults {
  double bin_width;
  double range_max;
};

/// bin_width = <x>/10, range_max = 10 <x>.
BinningDefaults default_binning(const IntervalSeries& intervals);

struct HistogramFitOptions {
  /// Bins with fewer counts are left out of the log fit.
  double min_count = 5.0;
  std::size_t min_bins = 3;
};

struct ExponentialHistogramFit {
  double lambda_hat = 0.0;
  /// Weighted R^2 of the log-linear fit.
  double r_squared = 0.0;
  std::size_t bins_used = 0;
};

/// Weighted least squares of ln(count) against bin center, weights = counts.
/// Throws InsufficientDataError when fewer than `min_bins` bins qualify.
ExponentialHistogramFit fit_exponential_histogram(const IntervalHistogram& hist,
                                                  const HistogramFitOptions& options = {});

/// Same fit on real-valued bin contents (e.g. expected counts).
ExponentialHistogramFit fit_exponential_bins(std::span<const double> counts, double bin_width,
                                             const HistogramFitOptions& options = {});

}  // namespace darksra
