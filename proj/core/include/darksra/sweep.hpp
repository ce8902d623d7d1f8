#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "darksra/simulator.hpp"
#include "darksra/sra.hpp"

namespace darksra {

struct SweepPoint {
  double t_ho = 0.0;
  double r_squared = 0.0;
  double lambda_hat = 0.0;
  std::size_t n_points = 0;
  /// Only known for simulated data.
  std::optional<double> afterpulse_fraction;
  /// Set when this point could not be analysed; the numeric fields are NaN.
  std::optional<std::string> error;

  bool ok() const noexcept { return !error.has_value(); }
};

struct SweepResult {
  /// Ascending and unique in t_ho.
  std::vector<SweepPoint> points;
  std::optional<double> threshold;
  double threshold_level = 0.99;
};

struct SweepOptions {
  /// Intervals analysed per grid point (the simulator produces one more tag).
  std::size_t counts_per_point = 1000;
  /// Independent simulations per grid point; reported values are their means.
  std::size_t replicates = 1;
  double threshold_level = 0.99;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  FitOptions fit;
};

/// Smallest t_ho whose R^2 is >= level and stays >= level for every larger
/// grid point. Failed points count as below the level.
std::optional<double> detect_threshold(std::span<const SweepPoint> points, double level);

/// Config used for grid point `index` (position in the ascending grid) and
/// replicate `replicate`: hold-off overridden, stop at counts_per_point + 1
/// tags, seed = derive_stream_seed(base.seed, index, replicate).
SimConfig derive_point_config(const SimConfig& base, double t_ho, std::size_t index,
                              std::size_t replicate, std::size_t counts_per_point);

/// Simulates and fits every hold-off in `t_ho_grid`. Points are independent
/// jobs; the result does not depend on scheduling.
SweepResult sweep_simulated(const SimConfig& base, std::span<const double> t_ho_grid,
                            const SweepOptions& options = {});

struct MeasuredDataset {
  double t_ho = 0.0;
  std::filesystem::path tags_file;
};

/// Same analysis over recorded tag files. Each file contributes its first
/// `counts_per_point` intervals (all of them when it has fewer).
SweepResult sweep_measured(std::span<const MeasuredDataset> datasets,
                           const SweepOptions& options = {});

/// Spearman rank correlation with average ranks for ties.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace darksra
