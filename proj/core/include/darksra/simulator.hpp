#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "darksra/series.hpp"

namespace darksra {

/// Periodic arming window for gated operation.
struct GateConfig {
  double frequency_hz = 0.0;
  double width_s = 0.0;
};

/// Parameters of the SPAD dark-count model.
///
/// Primary dark counts form a homogeneous Poisson process. Every registered
/// avalanche fills one trap with probability `afterpulse_prob`; the trap
/// releases after an Exp(`detrap_tau`) delay and retriggers the diode with
/// probability `trigger_prob` if the detector is armed at that moment.
/// The detector is armed when at least `holdoff` has elapsed since the last
/// registration (and, when gated, inside a gate window).
///
/// Exactly one of `duration` or `target_counts` must be set.
struct SimConfig {
  double dark_rate = 1000.0;
  double holdoff = 0.0;
  double afterpulse_prob = 0.0;
  double detrap_tau = 1e-6;
  double trigger_prob = 1.0;
  std::optional<double> duration;
  std::optional<std::uint64_t> target_counts;
  std::uint64_t seed = 0;
  std::optional<GateConfig> gate;
  /// Tick size of the emitted time tags.
  double unit_seconds = 1e-12;
  /// Upper bound on processed candidate events before giving up.
  std::uint64_t max_events = 1'000'000'000;

  /// Throws ConfigError on any violated constraint, including the
  /// subcriticality guard afterpulse_prob * trigger_prob < 1.
  void validate() const;
};

struct SimResult {
  TimeTagSeries tags;
  std::uint64_t registered_count = 0;
  std::uint64_t primary_count = 0;
  std::uint64_t afterpulse_count = 0;
  /// Candidates (primary or release) discarded because the detector was not armed.
  std::uint64_t suppressed_count = 0;
};

/// Runs the event loop. Deterministic for a fixed config, seed included.
SimResult simulate(const SimConfig& config);

/// Hold-off in whole ticks, rounded up so that ticks * unit >= holdoff.
std::int64_t holdoff_ticks(const SimConfig& config);

struct SurvivalReport {
  std::size_t n_intervals = 0;
  double min_interval_s = 0.0;
  bool min_interval_ok = false;
  /// KS is skipped for gated runs, whose interval law is not a shifted exponential.
  bool ks_applied = false;
  double ks_statistic = 0.0;
  double ks_critical = 0.0;
  bool ks_ok = false;
  bool passed = false;
};

/// Asymptotic Kolmogorov critical value sqrt(-ln(alpha/2)/2) / sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

/// Significance level used by interval_survival_check.
inline constexpr double kSurvivalAlpha = 0.01;

/// Self-check of a simulated run: every interval is at least the hold-off,
/// and (ungated) the intervals minus the hold-off follow Exp(dark_rate)
/// by a one-sample KS test at kSurvivalAlpha. Needs at least 100 counts.
SurvivalReport interval_survival_check(const SimResult& result, const SimConfig& config);

}  // namespace darksra
