#include "darksra/sra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "darksra/errors.hpp"

namespace darksra {

double poisson_sra_prediction(std::size_t rank, std::size_t n_points, double lambda) {
  if (rank == 1) throw SingularityError("SRA prediction diverges at rank 1");
  if (n_points < 2) throw RangeError("SRA prediction needs N >= 2");
  if (rank < 2 || rank > n_points) {
    throw RangeError("rank " + std::to_string(rank) + " outside [2, " + std::to_string(n_points) +
                     "]");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ParameterError("rate must be positive and finite");
  }
  return std::log(static_cast<double>(n_points) / static_cast<double>(rank - 1)) / lambda;
}

std::vector<double> poisson_sra_predictions(std::size_t n_points) {
  if (n_points < 2) throw RangeError("SRA prediction needs N >= 2");
  std::vector<double> out;
  out.reserve(n_points - 1);
  const auto n = static_cast<double>(n_points);
  for (std::size_t rank = 2; rank <= n_points; ++rank) {
    out.push_back(std::log(n / static_cast<double>(rank - 1)));
  }
  return out;
}

double estimate_lambda(const IntervalSeries& intervals) {
  if (intervals.n_points() == 0) throw InsufficientDataError("no intervals to estimate a rate");
  const double total = intervals.total();
  if (!(total > 0.0)) throw DegenerateDataError("all intervals are zero; rate is undefined");
  return static_cast<double>(intervals.n_points()) / total;
}

std::vector<double> normalized_sra(const RankedIntervals& ranked) {
  if (ranked.n_points() < 2) {
    throw InsufficientDataError("normalized SRA needs at least 2 intervals");
  }
  const double mean = ranked.mean_interval();
  if (!(mean > 0.0)) throw DegenerateDataError("mean interval is zero; cannot normalize");
  const auto x = ranked.ranked();
  std::vector<double> out;
  out.reserve(x.size() - 1);
  for (std::size_t i = 1; i < x.size(); ++i) out.push_back(x[i] / mean);
  return out;
}

double r_squared(std::span<const double> observed, std::span<const double> predicted) {
  if (observed.size() != predicted.size()) {
    throw ShapeError("observed has " + std::to_string(observed.size()) + " values, predicted has " +
                     std::to_string(predicted.size()));
  }
  if (observed.size() < 2) throw InsufficientDataError("R^2 needs at least 2 points");

  const double mean = compensated_sum(observed) / static_cast<double>(observed.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  bool exact = true;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double r = observed[i] - predicted[i];
    exact &= r == 0.0;
    const double d = observed[i] - mean;
    ss_res += r * r;
    ss_tot += d * d;
  }
  if (!(ss_tot > 0.0)) throw DegenerateVarianceError("observed values are constant");

  double r2 = 1.0 - ss_res / ss_tot;
  // 1 is reserved for an exact match; tiny residuals (or ones whose square
  // underflows) would otherwise round to it.
  if (!exact && r2 == 1.0) r2 = std::nextafter(1.0, 0.0);
  return r2;
}

double r_squared_clamped(double r2) noexcept { return std::clamp(r2, 0.0, 1.0); }

PoissonSraFit fit_poisson_sra(const IntervalSeries& intervals, const FitOptions& options) {
  const std::size_t minimum = std::max<std::size_t>(options.min_points, 2);
  if (intervals.n_points() < minimum) {
    throw InsufficientDataError("SRA fit needs at least " + std::to_string(minimum) +
                                " intervals, got " + std::to_string(intervals.n_points()));
  }
  const RankedIntervals ranked = rank_descending(intervals);

  PoissonSraFit fit;
  fit.lambda_hat = estimate_lambda(intervals);
  fit.n_points = ranked.n_points();
  fit.mean_interval = ranked.mean_interval();
  fit.normalized_observed = normalized_sra(ranked);
  fit.predicted = poisson_sra_predictions(fit.n_points);
  fit.r_squared = r_squared(fit.normalized_observed, fit.predicted);
  fit.ranked.assign(ranked.ranked().begin(), ranked.ranked().end());
  return fit;
}

double fit_lambda_least_squares(const RankedIntervals& ranked) {
  if (ranked.n_points() < 2) throw InsufficientDataError("least-squares fit needs N >= 2");
  const auto predicted = poisson_sra_predictions(ranked.n_points());
  const auto x = ranked.ranked();
  double xl = 0.0;
  double ll = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    xl += x[i + 1] * predicted[i];
    ll += predicted[i] * predicted[i];
  }
  if (!(xl > 0.0)) throw DegenerateDataError("ranked intervals are all zero beyond rank 1");
  return ll / xl;
}

}  // namespace darksra
