#include "darksra/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "darksra/errors.hpp"
#include "darksra/io.hpp"
#include "darksra/random.hpp"

namespace darksra {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename Job>
void parallel_for(std::size_t n, unsigned threads, Job&& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
}

SweepPoint failed_point(double t_ho, std::string message) {
  return {t_ho, kNaN, kNaN, 0, std::nullopt, std::move(message)};
}

void check_ascending_unique(const std::vector<double>& sorted) {
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!std::isfinite(sorted[i]) || sorted[i] < 0.0) {
      throw ParameterError("hold-off values must be finite and >= 0");
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw ParameterError("hold-off values must be unique");
    }
  }
}

struct ReplicateOutcome {
  double r_squared = kNaN;
  double lambda_hat = kNaN;
  double afterpulse_fraction = kNaN;
  std::size_t n_points = 0;
  std::optional<std::string> error;
};

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

std::optional<double> detect_threshold(std::span<const SweepPoint> points, double level) {
  std::optional<double> threshold;
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    if (!it->ok() || !(it->r_squared >= level)) break;
    threshold = it->t_ho;
  }
  return threshold;
}

SimConfig derive_point_config(const SimConfig& base, double t_ho, std::size_t index,
                              std::size_t replicate, std::size_t counts_per_point) {
  SimConfig config = base;
  config.holdoff = t_ho;
  config.duration.reset();
  config.target_counts = static_cast<std::uint64_t>(counts_per_point) + 1;
  config.seed = derive_stream_seed(base.seed, index, replicate);
  return config;
}

SweepResult sweep_simulated(const SimConfig& base, std::span<const double> t_ho_grid,
                            const SweepOptions& options) {
  if (t_ho_grid.empty()) throw InsufficientDataError("hold-off grid is empty");
  if (options.counts_per_point < 100) {
    throw ParameterError("counts_per_point must be >= 100");
  }
  if (options.replicates == 0) throw ParameterError("replicates must be >= 1");

  std::vector<double> grid(t_ho_grid.begin(), t_ho_grid.end());
  std::sort(grid.begin(), grid.end());
  check_ascending_unique(grid);

  const std::size_t reps = options.replicates;
  std::vector<ReplicateOutcome> outcomes(grid.size() * reps);
  parallel_for(outcomes.size(), options.threads, [&](std::size_t job) {
    const std::size_t index = job / reps;
    const std::size_t replicate = job % reps;
    ReplicateOutcome& out = outcomes[job];
    try {
      const SimConfig config =
          derive_point_config(base, grid[index], index, replicate, options.counts_per_point);
      const SimResult sim = simulate(config);
      const IntervalSeries intervals =
          intervals_from_tags(sim.tags).head(options.counts_per_point);
      const PoissonSraFit fit = fit_poisson_sra(intervals, options.fit);
      out.r_squared = fit.r_squared;
      out.lambda_hat = fit.lambda_hat;
      out.n_points = fit.n_points;
      out.afterpulse_fraction = static_cast<double>(sim.afterpulse_count) /
                                static_cast<double>(sim.registered_count);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  });

  SweepResult result;
  result.threshold_level = options.threshold_level;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto first = outcomes.begin() + static_cast<std::ptrdiff_t>(i * reps);
    const auto last = first + static_cast<std::ptrdiff_t>(reps);
    const auto bad = std::find_if(first, last, [](const auto& o) { return o.error.has_value(); });
    if (bad != last) {
      result.points.push_back(failed_point(grid[i], *bad->error));
      continue;
    }
    SweepPoint point;
    point.t_ho = grid[i];
    point.n_points = first->n_points;
    double r2 = 0.0, lambda = 0.0, ap = 0.0;
    for (auto it = first; it != last; ++it) {
      r2 += it->r_squared;
      lambda += it->lambda_hat;
      ap += it->afterpulse_fraction;
    }
    const auto n = static_cast<double>(reps);
    point.r_squared = r2 / n;
    point.lambda_hat = lambda / n;
    point.afterpulse_fraction = ap / n;
    result.points.push_back(std::move(point));
  }
  result.threshold = detect_threshold(result.points, result.threshold_level);
  return result;
}

SweepResult sweep_measured(std::span<const MeasuredDataset> datasets, const SweepOptions& options) {
  if (datasets.empty()) throw InsufficientDataError("no datasets to sweep");

  std::vector<MeasuredDataset> sorted(datasets.begin(), datasets.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& a, const auto& b) { return a.t_ho < b.t_ho; });
  std::vector<double> grid;
  for (const auto& d : sorted) grid.push_back(d.t_ho);
  check_ascending_unique(grid);

  SweepResult result;
  result.threshold_level = options.threshold_level;
  result.points.resize(sorted.size());
  parallel_for(sorted.size(), options.threads, [&](std::size_t i) {
    try {
      IntervalSeries intervals = intervals_from_tags(read_tags(sorted[i].tags_file));
      if (options.counts_per_point > 0) intervals = intervals.head(options.counts_per_point);
      const PoissonSraFit fit = fit_poisson_sra(intervals, options.fit);
      result.points[i] = {sorted[i].t_ho, fit.r_squared, fit.lambda_hat, fit.n_points,
                          std::nullopt, std::nullopt};
    } catch (const std::exception& e) {
      result.points[i] = failed_point(sorted[i].t_ho, e.what());
    }
  });
  result.threshold = detect_threshold(result.points, result.threshold_level);
  return result;
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ShapeError("spearman: sequences differ in length");
  if (x.size() < 2) throw InsufficientDataError("spearman: need at least 2 pairs");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double mean = (static_cast<double>(x.size()) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (!(sxx > 0.0 && syy > 0.0)) throw DegenerateVarianceError("spearman: constant input");
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace darksra
