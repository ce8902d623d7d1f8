#include "darksra/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "darksra/errors.hpp"

namespace darksra {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_integer(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "expected " + std::string(what) + ", got '" + std::string(token) + "'");
  }
  return value;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::pair<std::string_view, std::string_view> split_assignment(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) return {};
  return {trim(text.substr(0, eq)), trim(text.substr(eq + 1))};
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  const auto* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc{} || ptr != end) {
    throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

std::int64_t parse_int64(std::string_view token, std::size_t line) {
  return parse_integer<std::int64_t>(token, line, "an integer");
}

std::uint64_t parse_uint64(std::string_view token, std::size_t line) {
  return parse_integer<std::uint64_t>(token, line, "a nonnegative integer");
}

// ---------------------------------------------------------------------------
// Time-tag files

TimeTagSeries parse_tags(std::istream& in) {
  std::optional<double> unit;
  Provenance provenance;
  std::vector<std::int64_t> tags;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const auto [key, value] = split_assignment(line.substr(1));
      if (key.empty()) continue;
      if (key == "unit_seconds") {
        if (unit) throw FormatError("duplicate unit_seconds metadata on line " +
                                    std::to_string(line_no));
        unit = parse_double(value, line_no);
      } else if (key == "source") {
        if (value == "measured") {
          provenance.source = Source::measured;
        } else if (value == "simulated") {
          provenance.source = Source::simulated;
        } else {
          throw ParseError(line_no, "unknown source '" + std::string(value) + "'");
        }
      } else if (key == "seed") {
        provenance.seed = parse_uint64(value, line_no);
      } else {
        provenance.extra.emplace_back(key, value);
      }
      continue;
    }
    const std::int64_t tag = parse_int64(line, line_no);
    if (!tags.empty() && tag < tags.back()) throw OrderingError(tags.size(), line_no);
    tags.push_back(tag);
  }
  if (in.bad()) throw IoError("read error while parsing time tags");
  if (!unit) throw FormatError("missing mandatory '# unit_seconds=' metadata");
  if (!(*unit > 0.0) || !std::isfinite(*unit)) {
    throw FormatError("unit_seconds must be positive, got " + format_double(*unit));
  }
  return TimeTagSeries(std::move(tags), *unit, std::move(provenance));
}

TimeTagSeries read_tags(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return parse_tags(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.detail());
  }
}

std::string format_tags(const TimeTagSeries& series) {
  std::string out;
  out.reserve(series.size() * 14 + 128);
  out += "# unit_seconds=" + format_double(series.unit_seconds()) + "\n";
  out += "# source=" + std::string(to_string(series.provenance().source)) + "\n";
  if (series.provenance().seed) out += "# seed=" + std::to_string(*series.provenance().seed) + "\n";
  for (const auto& [key, value] : series.provenance().extra) out += "# " + key + "=" + value + "\n";
  char buf[24];
  for (const auto tag : series.tags()) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, tag);
    out.append(buf, ptr);
    out += '\n';
  }
  return out;
}

void write_tags(const TimeTagSeries& series, const std::filesystem::path& path) {
  write_text(path, format_tags(series));
}

// ---------------------------------------------------------------------------
// CSV outputs

std::string format_sra_csv(const PoissonSraFit& fit) {
  std::string out = "n,x_n_s,x_n_over_mean,prediction\n";
  for (std::size_t i = 0; i < fit.predicted.size(); ++i) {
    out += std::to_string(i + 2) + ',' + format_double(fit.ranked[i + 1]) + ',' +
           format_double(fit.normalized_observed[i]) + ',' + format_double(fit.predicted[i]) + '\n';
  }
  return out;
}

void write_sra_csv(const PoissonSraFit& fit, const std::filesystem::path& path) {
  write_text(path, format_sra_csv(fit));
}

std::string format_intervals_csv(const IntervalSeries& intervals) {
  std::string out = "i,x_i_s\n";
  const auto v = intervals.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += std::to_string(i + 1) + ',' + format_double(v[i]) + '\n';
  }
  return out;
}

void write_intervals_csv(const IntervalSeries& intervals, const std::filesystem::path& path) {
  write_text(path, format_intervals_csv(intervals));
}

std::string format_sweep_csv(const SweepResult& result) {
  std::string out = "t_ho_s,r_squared,lambda_hat_hz,n_points,afterpulse_fraction\n";
  for (const auto& p : result.points) {
    out += format_double(p.t_ho) + ',' + format_double(p.r_squared) + ',' +
           format_double(p.lambda_hat) + ',' + std::to_string(p.n_points) + ',' +
           (p.afterpulse_fraction ? format_double(*p.afterpulse_fraction) : std::string()) + '\n';
  }
  for (const auto& p : result.points) {
    if (p.error) out += "# failed t_ho_s=" + format_double(p.t_ho) + " error=" + *p.error + '\n';
  }
  out += "# threshold_level=" + format_double(result.threshold_level) + '\n';
  out += "# threshold_s=" + (result.threshold ? format_double(*result.threshold) : "none") + '\n';
  return out;
}

void write_sweep_csv(const SweepResult& result, const std::filesystem::path& path) {
  write_text(path, format_sweep_csv(result));
}

std::string format_histogram_csv(const IntervalHistogram& hist) {
  std::string out = "bin_start,bin_end,count\n";
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    out += format_double(hist.bin_start(k)) + ',' + format_double(hist.bin_end(k)) + ',' +
           std::to_string(hist.counts[k]) + '\n';
  }
  return out;
}

void write_histogram_csv(const IntervalHistogram& hist, const std::filesystem::path& path) {
  write_text(path, format_histogram_csv(hist));
}

// ---------------------------------------------------------------------------
// Simulator config

void apply_config_value(SimConfig& config, std::string_view key, std::string_view value) {
  if (key == "dark_rate") {
    config.dark_rate = parse_double(value);
  } else if (key == "holdoff") {
    config.holdoff = parse_double(value);
  } else if (key == "afterpulse_prob") {
    config.afterpulse_prob = parse_double(value);
  } else if (key == "detrap_tau") {
    config.detrap_tau = parse_double(value);
  } else if (key == "trigger_prob") {
    config.trigger_prob = parse_double(value);
  } else if (key == "duration") {
    config.duration = parse_double(value);
  } else if (key == "target_counts") {
    config.target_counts = parse_uint64(value);
  } else if (key == "seed") {
    config.seed = parse_uint64(value);
  } else if (key == "gate_frequency") {
    if (!config.gate) config.gate = GateConfig{};
    config.gate->frequency_hz = parse_double(value);
  } else if (key == "gate_width") {
    if (!config.gate) config.gate = GateConfig{};
    config.gate->width_s = parse_double(value);
  } else if (key == "unit_seconds") {
    config.unit_seconds = parse_double(value);
  } else if (key == "max_events") {
    config.max_events = parse_uint64(value);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

SimConfig parse_sim_config(std::istream& in) {
  SimConfig config;
  std::vector<std::string> seen;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto [key, value] = split_assignment(line);
    if (key.empty()) throw ParseError(line_no, "expected key=value");
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" +
                        std::string(key) + "'");
    }
    seen.emplace_back(key);
    try {
      apply_config_value(config, key, value);
    } catch (const ParseError& e) {
      throw ParseError(line_no, e.detail());
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

SimConfig read_sim_config(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_sim_config(in);
}

std::vector<std::pair<std::string, std::string>> config_entries(const SimConfig& config) {
  std::vector<std::pair<std::string, std::string>> out{
      {"dark_rate", format_double(config.dark_rate)},
      {"holdoff", format_double(config.holdoff)},
      {"afterpulse_prob", format_double(config.afterpulse_prob)},
      {"detrap_tau", format_double(config.detrap_tau)},
      {"trigger_prob", format_double(config.trigger_prob)},
  };
  if (config.duration) out.emplace_back("duration", format_double(*config.duration));
  if (config.target_counts) out.emplace_back("target_counts", std::to_string(*config.target_counts));
  out.emplace_back("seed", std::to_string(config.seed));
  if (config.gate) {
    out.emplace_back("gate_frequency", format_double(config.gate->frequency_hz));
    out.emplace_back("gate_width", format_double(config.gate->width_s));
  }
  out.emplace_back("unit_seconds", format_double(config.unit_seconds));
  out.emplace_back("max_events", std::to_string(config.max_events));
  return out;
}

void write_sim_diagnostics(const SimResult& result, const SimConfig& config,
                           const std::filesystem::path& path) {
  std::ostringstream out;
  out << "registered_count=" << result.registered_count << '\n'
      << "primary_count=" << result.primary_count << '\n'
      << "afterpulse_count=" << result.afterpulse_count << '\n'
      << "suppressed_count=" << result.suppressed_count << '\n';
  if (result.registered_count > 0) {
    out << "afterpulse_fraction="
        << format_double(static_cast<double>(result.afterpulse_count) /
                         static_cast<double>(result.registered_count))
        << '\n';
  }
  if (result.registered_count >= 100) {
    const SurvivalReport report = interval_survival_check(result, config);
    out << "min_interval_s=" << format_double(report.min_interval_s) << '\n'
        << "min_interval_ok=" << (report.min_interval_ok ? "true" : "false") << '\n'
        << "ks_applied=" << (report.ks_applied ? "true" : "false") << '\n';
    if (report.ks_applied) {
      out << "ks_statistic=" << format_double(report.ks_statistic) << '\n'
          << "ks_critical=" << format_double(report.ks_critical) << '\n';
    }
    out << "survival_check=" << (report.passed ? "pass" : "fail") << '\n';
  }
  write_text(path, out.str());
}

// ---------------------------------------------------------------------------
// Grids

std::vector<double> parse_grid(std::string_view spec) {
  std::vector<std::string_view> parts;
  const char sep = spec.find(':') != std::string_view::npos ? ':' : ',';
  for (std::size_t start = 0;;) {
    const auto end = spec.find(sep, start);
    parts.push_back(trim(spec.substr(start, end - start)));
    if (end == std::string_view::npos) break;
    start = end + 1;
  }

  if (sep == ',') {
    std::vector<double> values;
    for (const auto part : parts) values.push_back(parse_double(part));
    return values;
  }
  if (parts.size() != 4) throw ParseError(0, "grid must be start:stop:log|lin:count");
  const double start = parse_double(parts[0]);
  const double stop = parse_double(parts[1]);
  const auto count = parse_uint64(parts[3]);
  if (count == 0) throw ParameterError("grid count must be >= 1");
  if (!(stop >= start)) throw ParameterError("grid stop must be >= start");

  std::vector<double> values(count);
  if (count == 1) {
    values[0] = start;
    return values;
  }
  const double steps = static_cast<double>(count - 1);
  if (parts[2] == "log") {
    if (!(start > 0.0)) throw ParameterError("log grid needs start > 0");
    const double ratio = std::log(stop / start);
    for (std::size_t k = 0; k < count; ++k) {
      values[k] = start * std::exp(ratio * static_cast<double>(k) / steps);
    }
  } else if (parts[2] == "lin") {
    for (std::size_t k = 0; k < count; ++k) {
      values[k] = start + (stop - start) * static_cast<double>(k) / steps;
    }
  } else {
    throw ParseError(0, "grid spacing must be 'log' or 'lin', got '" + std::string(parts[2]) + "'");
  }
  values.front() = start;
  values.back() = stop;
  return values;
}

}  // namespace darksra
