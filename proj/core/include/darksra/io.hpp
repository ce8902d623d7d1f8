#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "darksra/histogram.hpp"
#include "darksra/series.hpp"
#include "darksra/simulator.hpp"
#include "darksra/sra.hpp"
#include "darksra/sweep.hpp"

namespace darksra {

/// Shortest decimal that reads back to the same double. Locale-independent.
std::string format_double(double value);

// Time-tag files
//
//   # unit_seconds=1e-12
//   # source=simulated
//   # seed=42
//   # dark_rate=1000
//   0
//   1000
//
// Header lines are `# key=value`; `unit_seconds` is mandatory. The body is
// one decimal integer tick per line, nondecreasing, LF-terminated.

TimeTagSeries parse_tags(std::istream& in);
TimeTagSeries read_tags(const std::filesystem::path& path);
std::string format_tags(const TimeTagSeries& series);
void write_tags(const TimeTagSeries& series, const std::filesystem::path& path);

/// Header `n,x_n_s,x_n_over_mean,prediction`, one row per rank n = 2..N.
std::string format_sra_csv(const PoissonSraFit& fit);
void write_sra_csv(const PoissonSraFit& fit, const std::filesystem::path& path);

/// Raw intervals in acquisition order: `i,x_i_s` with i starting at 1.
std::string format_intervals_csv(const IntervalSeries& intervals);
void write_intervals_csv(const IntervalSeries& intervals, const std::filesystem::path& path);

/// Header `t_ho_s,r_squared,lambda_hat_hz,n_points,afterpulse_fraction`,
/// rows ascending in t_ho, then `# failed ...` lines for failed points and a
/// final `# threshold_s=<value|none>` summary.
std::string format_sweep_csv(const SweepResult& result);
void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path);

/// Header `bin_start,bin_end,count`.
std::string format_histogram_csv(const IntervalHistogram& hist);
void write_histogram_csv(const IntervalHistogram& hist, const std::filesystem::path& path);

/// Flat `key=value` simulator config; keys match SimConfig field names, with
/// the gate given as `gate_frequency` and `gate_width`. `#` starts a comment.
SimConfig parse_sim_config(std::istream& in);
SimConfig read_sim_config(const std::filesystem::path& path);
/// Applies one key=value assignment; throws ConfigError for unknown keys.
void apply_config_value(SimConfig& config, std::string_view key, std::string_view value);
/// The config in the same key=value form (stop condition, gate only if set).
std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& config);

/// Key=value diagnostics sidecar for a simulation run.
void write_sim_diagnostics(const SimResult& result, const SimConfig& config,
                           const std::filesystem::path& path);

/// Hold-off grid syntax: `start:stop:log:count`, `start:stop:lin:count`, or a
/// comma-separated list of values.
std::vector<double> parse_grid(std::string_view spec);

/// Whole-token numeric parsing; throws ParseError with `line` on failure.
double parse_double(std::string_view token, std::size_t line = 0);
std::int64_t parse_int64(std::string_view token, std::size_t line = 0);
std::uint64_t parse_uint64(std::string_view token, std::size_t line = 0);

}  // namespace darksra
