#include "darksra/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "darksra/errors.hpp"
#include "darksra/random.hpp"

namespace darksra {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

bool probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

std::string fmt(double v) { return std::to_string(v); }

}  // namespace

void SimConfig::validate() const {
  if (!finite_positive(dark_rate)) throw ConfigError("dark_rate must be > 0, got " + fmt(dark_rate));
  if (!std::isfinite(holdoff) || holdoff < 0.0) {
    throw ConfigError("holdoff must be >= 0, got " + fmt(holdoff));
  }
  if (!probability(afterpulse_prob)) {
    throw ConfigError("afterpulse_prob must lie in [0, 1], got " + fmt(afterpulse_prob));
  }
  if (!finite_positive(detrap_tau)) {
    throw ConfigError("detrap_tau must be > 0, got " + fmt(detrap_tau));
  }
  if (!probability(trigger_prob)) {
    throw ConfigError("trigger_prob must lie in [0, 1], got " + fmt(trigger_prob));
  }
  if (!(afterpulse_prob * trigger_prob < 1.0)) {
    throw ConfigError("afterpulse_prob * trigger_prob must be < 1 (cascade would not terminate)");
  }
  if (duration.has_value() == target_counts.has_value()) {
    throw ConfigError("exactly one stop condition (duration or target_counts) must be set");
  }
  if (duration && !finite_positive(*duration)) {
    throw ConfigError("duration must be > 0, got " + fmt(*duration));
  }
  if (target_counts && *target_counts == 0) throw ConfigError("target_counts must be > 0");
  if (gate) {
    if (!finite_positive(gate->frequency_hz)) throw ConfigError("gate frequency must be > 0");
    if (!(gate->width_s > 0.0 && gate->width_s < 1.0 / gate->frequency_hz)) {
      throw ConfigError("gate width must satisfy 0 < width < 1/frequency");
    }
  }
  if (!finite_positive(unit_seconds)) throw ConfigError("unit_seconds must be > 0");
  if (max_events == 0) throw ConfigError("max_events must be > 0");
}

std::int64_t holdoff_ticks(const SimConfig& config) {
  // Round up to whole ticks, ignoring representation error in the ratio.
  return static_cast<std::int64_t>(std::ceil(config.holdoff / config.unit_seconds * (1.0 - 1e-12)));
}

SimResult simulate(const SimConfig& config) {
  config.validate();

  Rng rng(config.seed);
  const double primary_mean = 1.0 / config.dark_rate;
  const std::int64_t dead_ticks = holdoff_ticks(config);
  const double gate_period = config.gate ? 1.0 / config.gate->frequency_hz : 0.0;
  const double max_time = 9.0e18 * config.unit_seconds;

  std::priority_queue<double, std::vector<double>, std::greater<>> releases;
  std::vector<std::int64_t> tags;
  if (config.target_counts) tags.reserve(static_cast<std::size_t>(*config.target_counts));

  SimResult counts{TimeTagSeries({}, config.unit_seconds)};
  std::optional<std::int64_t> last_tick;
  double next_primary = rng.exponential(primary_mean);
  std::uint64_t events = 0;

  while (!config.target_counts || counts.registered_count < *config.target_counts) {
    const bool is_release = !releases.empty() && releases.top() <= next_primary;
    const double t = is_release ? releases.top() : next_primary;
    if (config.duration && t > *config.duration) break;
    if (++events > config.max_events || t > max_time) {
      throw ConfigError("stop condition not reached within " + std::to_string(config.max_events) +
                        " events");
    }

    if (is_release) {
      releases.pop();
      if (!rng.bernoulli(config.trigger_prob)) continue;
    } else {
      next_primary += rng.exponential(primary_mean);
    }

    const auto tick = static_cast<std::int64_t>(std::llround(t / config.unit_seconds));
    bool armed = !last_tick || tick - *last_tick >= dead_ticks;
    if (armed && config.gate) armed = std::fmod(t, gate_period) < config.gate->width_s;
    if (!armed) {
      ++counts.suppressed_count;
      continue;
    }

    tags.push_back(tick);
    last_tick = tick;
    ++counts.registered_count;
    ++(is_release ? counts.afterpulse_count : counts.primary_count);
    if (config.afterpulse_prob > 0.0 && rng.bernoulli(config.afterpulse_prob)) {
      releases.push(t + rng.exponential(config.detrap_tau));
    }
  }

  Provenance provenance{Source::simulated, config.seed, {}};
  counts.tags = TimeTagSeries(std::move(tags), config.unit_seconds, std::move(provenance));
  return counts;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (n == 0) throw InsufficientDataError("KS critical value needs n > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

SurvivalReport interval_survival_check(const SimResult& result, const SimConfig& config) {
  if (result.registered_count < 100) {
    throw InsufficientDataError("survival check needs at least 100 counts, got " +
                                std::to_string(result.registered_count));
  }
  const auto tags = result.tags.tags();
  const double unit = result.tags.unit_seconds();
  const std::int64_t dead_ticks = holdoff_ticks(config);

  SurvivalReport report;
  report.n_intervals = tags.size() - 1;

  std::vector<double> excess(report.n_intervals);
  std::int64_t min_gap = tags[1] - tags[0];
  for (std::size_t i = 0; i + 1 < tags.size(); ++i) {
    const std::int64_t gap = tags[i + 1] - tags[i];
    min_gap = std::min(min_gap, gap);
    excess[i] = static_cast<double>(gap - dead_ticks) * unit;
  }
  report.min_interval_s = static_cast<double>(min_gap) * unit;
  report.min_interval_ok = min_gap >= dead_ticks;

  report.ks_applied = !config.gate.has_value();
  if (report.ks_applied) {
    std::sort(excess.begin(), excess.end());
    const auto n = static_cast<double>(excess.size());
    double d = 0.0;
    for (std::size_t i = 0; i < excess.size(); ++i) {
      const double cdf = -std::expm1(-config.dark_rate * std::max(excess[i], 0.0));
      d = std::max({d, cdf - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - cdf});
    }
    report.ks_statistic = d;
    report.ks_critical = ks_critical_value(excess.size(), kSurvivalAlpha);
    report.ks_ok = d <= report.ks_critical;
  }
  report.passed = report.min_interval_ok && (!report.ks_applied || report.ks_ok);
  return report;
}

}  // namespace darksra
