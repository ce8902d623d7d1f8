#include "darksra/histogram.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "darksra/errors.hpp"

namespace darksra {

std::uint64_t IntervalHistogram::total() const noexcept {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) + underflow + overflow;
}

IntervalHistogram build_histogram(const IntervalSeries& intervals, double bin_width,
                                  double range_max) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw ParameterError("bin width must be positive and finite");
  }
  if (!(range_max >= bin_width) || !std::isfinite(range_max)) {
    throw ParameterError("histogram range must be at least one bin wide");
  }
  // Absorb floating noise in range/width before rounding up.
  const auto n_bins = static_cast<std::size_t>(std::ceil(range_max / bin_width * (1.0 - 1e-12)));

  IntervalHistogram hist;
  hist.bin_width = bin_width;
  hist.range_max = static_cast<double>(n_bins) * bin_width;
  hist.counts.assign(n_bins, 0);
  for (const double x : intervals.values()) {
    if (x < 0.0) {
      ++hist.underflow;
      continue;
    }
    const double k = std::floor(x / bin_width);
    if (k >= static_cast<double>(n_bins)) {
      ++hist.overflow;
    } else {
      ++hist.counts[static_cast<std::size_t>(k)];
    }
  }
  return hist;
}

BinningDefaults default_binning(const IntervalSeries& intervals) {
  const double mean = intervals.mean();
  if (!(mean > 0.0)) throw DegenerateDataError("mean interval is zero; cannot choose binning");
  return {mean / 10.0, 10.0 * mean};
}

ExponentialHistogramFit fit_exponential_bins(std::span<const double> counts, double bin_width,
                                             const HistogramFitOptions& options) {
  if (!(bin_width > 0.0)) throw ParameterError("bin width must be positive");

  double sw = 0.0, sx = 0.0, sy = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < options.min_count || !(counts[k] > 0.0)) continue;
    const double w = counts[k];
    const double x = (static_cast<double>(k) + 0.5) * bin_width;
    sw += w;
    sx += w * x;
    sy += w * std::log(counts[k]);
    ++used;
  }
  if (used < std::max<std::size_t>(options.min_bins, 2)) {
    throw InsufficientDataError("exponential histogram fit needs " +
                                std::to_string(options.min_bins) + " bins with >= " +
                                std::to_string(options.min_count) + " counts, got " +
                                std::to_string(used));
  }
  const double x_mean = sx / sw;
  const double y_mean = sy / sw;

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (counts[k] < options.min_count || !(counts[k] > 0.0)) continue;
    const double w = counts[k];
    const double dx = (static_cast<double>(k) + 0.5) * bin_width - x_mean;
    const double dy = std::log(counts[k]) - y_mean;
    sxx += w * dx * dx;
    sxy += w * dx * dy;
    syy += w * dy * dy;
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) throw DegenerateDataError("histogram does not decay; no exponential rate");

  ExponentialHistogramFit fit;
  fit.lambda_hat = -slope;
  fit.bins_used = used;
  // For a weighted line fit SS_res = syy - sxy^2 / sxx.
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

ExponentialHistogramFit fit_exponential_histogram(const IntervalHistogram& hist,
                                                  const HistogramFitOptions& options) {
  std::vector<double> counts(hist.counts.begin(), hist.counts.end());
  return fit_exponential_bins(counts, hist.bin_width, options);
}

}  // namespace darksra
