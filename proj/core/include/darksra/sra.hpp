#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "darksra/series.hpp"

namespace darksra {

/// Expected n-th largest interval of N exponential(lambda) samples,
/// (1/lambda) * ln(N / (n - 1)), valid for 2 <= n <= N.
///
/// Rank 1 diverges and raises SingularityError; other ranks outside
/// [2, N] raise RangeError and a nonpositive rate raises ParameterError.
double poisson_sra_prediction(std::size_t rank, std::size_t n_points, double lambda);

/// Dimensionless predictions ln(N / (n - 1)) for n = 2..N. The returned
/// vector has N - 1 entries, strictly decreasing.
std::vector<double> poisson_sra_predictions(std::size_t n_points);

/// Maximum-likelihood rate N / sum(intervals) = 1 / <x>.
double estimate_lambda(const IntervalSeries& intervals);

/// x_n / <x> for n = 2..N. Rank 1 is excluded.
std::vector<double> normalized_sra(const RankedIntervals& ranked);

/// Coefficient of determination 1 - SS_res / SS_tot, with SS_tot taken
/// about the mean of `observed`. Not clamped: very poor fits go negative.
/// Returns exactly 1 only when the residual is exactly zero.
double r_squared(std::span<const double> observed, std::span<const double> predicted);

/// R^2 clamped into [0, 1], for plotting.
double r_squared_clamped(double r2) noexcept;

struct FitOptions {
  std::size_t min_points = 10;
};

struct PoissonSraFit {
  double lambda_hat = 0.0;
  std::size_t n_points = 0;
  double mean_interval = 0.0;
  /// All N ranked intervals in seconds, x_1 first.
  std::vector<double> ranked;
  /// ln(N / (n - 1)) for n = 2..N.
  std::vector<double> predicted;
  /// x_n / <x> for n = 2..N.
  std::vector<double> normalized_observed;
  double r_squared = 0.0;
};

/// Rank, estimate the rate by MLE, and score the normalized SRA against the
/// parameter-free Poisson prediction.
PoissonSraFit fit_poisson_sra(const IntervalSeries& intervals, const FitOptions& options = {});

/// Diagnostic alternative to the MLE: the rate minimising
/// sum_{n>=2} (x_n - ln(N/(n-1)) / lambda)^2 in closed form.
double fit_lambda_least_squares(const RankedIntervals& ranked);

}  // namespace darksra
