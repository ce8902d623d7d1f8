// darksra: command-line driver for dark-count SRA analysis.
//
//   darksra simulate --dark-rate 1000 --holdoff 20e-6 --counts 1001 --seed 42 --out tags.txt
//   darksra sra tags.txt --out sra.csv
//   darksra fit tags.txt
//   darksra hist tags.txt --out hist.csv
//   darksra sweep --grid 0.1e-6:40e-6:log:20 --ap-prob 0.3 --detrap-tau 2e-6 --out sweep.csv
//   darksra compare tags.txt
//
// Exit codes: 0 success, 1 data/format errors, 2 usage errors.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "darksra/errors.hpp"
#include "darksra/histogram.hpp"
#include "darksra/io.hpp"
#include "darksra/simulator.hpp"
#include "darksra/sra.hpp"
#include "darksra/sweep.hpp"

namespace fs = std::filesystem;
using namespace darksra;

namespace {

constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct SimFlags {
  std::optional<fs::path> config_file;
  std::optional<double> dark_rate;
  std::optional<double> holdoff;
  std::optional<double> ap_prob;
  std::optional<double> detrap_tau;
  std::optional<double> trigger_prob;
  std::optional<std::uint64_t> counts;
  std::optional<double> duration;
  std::optional<double> gate_frequency;
  std::optional<double> gate_width;
  std::optional<double> unit;
  std::optional<std::uint64_t> seed;
};

void add_sim_flags(CLI::App& cmd, SimFlags& f, bool with_stop) {
  cmd.add_option("--config", f.config_file, "key=value simulator config file")
      ->check(CLI::ExistingFile);
  cmd.add_option("--dark-rate", f.dark_rate, "primary dark-count rate [1/s]");
  cmd.add_option("--holdoff", f.holdoff, "hold-off dead time [s]");
  cmd.add_option("--ap-prob", f.ap_prob, "trap-filling probability per avalanche");
  cmd.add_option("--detrap-tau", f.detrap_tau, "mean trap-release delay [s]");
  cmd.add_option("--trigger-prob", f.trigger_prob, "probability a release retriggers");
  if (with_stop) {
    cmd.add_option("--counts", f.counts, "stop after this many registered counts");
    cmd.add_option("--duration", f.duration, "stop after this much simulated time [s]");
  }
  cmd.add_option("--gate-frequency", f.gate_frequency, "gate frequency [Hz]");
  cmd.add_option("--gate-width", f.gate_width, "gate width [s]");
  cmd.add_option("--unit", f.unit, "time-tag tick [s]");
  cmd.add_option("--seed", f.seed, "RNG seed");
}

SimConfig build_sim_config(const SimFlags& f) {
  SimConfig c = f.config_file ? read_sim_config(*f.config_file) : SimConfig{};
  if (f.dark_rate) c.dark_rate = *f.dark_rate;
  if (f.holdoff) c.holdoff = *f.holdoff;
  if (f.ap_prob) c.afterpulse_prob = *f.ap_prob;
  if (f.detrap_tau) c.detrap_tau = *f.detrap_tau;
  if (f.trigger_prob) c.trigger_prob = *f.trigger_prob;
  if (f.counts) {
    c.target_counts = *f.counts;
    c.duration.reset();
  }
  if (f.duration) {
    c.duration = *f.duration;
    c.target_counts.reset();
  }
  if (f.gate_frequency || f.gate_width) {
    GateConfig gate = c.gate.value_or(GateConfig{});
    if (f.gate_frequency) gate.frequency_hz = *f.gate_frequency;
    if (f.gate_width) gate.width_s = *f.gate_width;
    c.gate = gate;
  }
  if (f.unit) c.unit_seconds = *f.unit;
  if (f.seed) c.seed = *f.seed;
  return c;
}

IntervalSeries load_intervals(const fs::path& path, std::optional<std::size_t> n) {
  IntervalSeries intervals = intervals_from_tags(read_tags(path));
  if (n) {
    if (intervals.n_points() < *n) {
      throw InsufficientDataError(path.string() + " has " + std::to_string(intervals.n_points()) +
                                  " intervals, --n asked for " + std::to_string(*n));
    }
    intervals = intervals.head(*n);
  }
  return intervals;
}

void print_kv(const std::string& key, double value) {
  std::cout << key << '=' << format_double(value) << '\n';
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  SimFlags sim;
  fs::path out;
  std::optional<fs::path> diag;
};

int run_simulate(const SimulateArgs& a) {
  const SimConfig config = build_sim_config(a.sim);
  const SimResult result = simulate(config);

  Provenance provenance{Source::simulated, config.seed, {}};
  for (auto& [key, value] : config_entries(config)) {
    if (key != "seed" && key != "unit_seconds") provenance.extra.emplace_back(key, value);
  }
  const TimeTagSeries tags(std::vector<std::int64_t>(result.tags.tags().begin(),
                                                     result.tags.tags().end()),
                           result.tags.unit_seconds(), std::move(provenance));
  write_tags(tags, a.out);
  if (a.diag) write_sim_diagnostics(result, config, *a.diag);

  std::cout << "registered_count=" << result.registered_count << '\n'
            << "primary_count=" << result.primary_count << '\n'
            << "afterpulse_count=" << result.afterpulse_count << '\n'
            << "suppressed_count=" << result.suppressed_count << '\n';
  return 0;
}

// --- sra / fit ----------------------------------------------------------------

struct AnalysisArgs {
  fs::path tags;
  std::optional<std::size_t> n;
  std::optional<fs::path> out;
  std::optional<fs::path> raw_out;
  std::size_t min_points = FitOptions{}.min_points;
};

int run_sra(const AnalysisArgs& a) {
  const IntervalSeries intervals = load_intervals(a.tags, a.n);
  const PoissonSraFit fit = fit_poisson_sra(intervals, {a.min_points});
  if (a.out) write_sra_csv(fit, *a.out);
  if (a.raw_out) write_intervals_csv(intervals, *a.raw_out);
  std::cout << "n_points=" << fit.n_points << '\n';
  print_kv("lambda_hat_hz", fit.lambda_hat);
  print_kv("r_squared", fit.r_squared);
  return 0;
}

int run_fit(const AnalysisArgs& a) {
  const IntervalSeries intervals = load_intervals(a.tags, a.n);
  const PoissonSraFit fit = fit_poisson_sra(intervals, {a.min_points});
  const double lambda_lsq = fit_lambda_least_squares(RankedIntervals(fit.ranked));
  nlohmann::ordered_json j;
  j["n_points"] = fit.n_points;
  j["lambda_hat_hz"] = fit.lambda_hat;
  j["lambda_lsq_hz"] = lambda_lsq;
  j["mean_interval_s"] = fit.mean_interval;
  j["r_squared"] = fit.r_squared;
  j["r_squared_clamped"] = r_squared_clamped(fit.r_squared);
  std::cout << j.dump() << '\n';
  return 0;
}

// --- hist / compare -------------------------------------------------------------

struct HistArgs {
  fs::path tags;
  std::optional<std::size_t> n;
  std::optional<fs::path> out;
  std::optional<double> bin_width;
  std::optional<double> range_max;
  double min_count = HistogramFitOptions{}.min_count;
};

IntervalHistogram histogram_for(const IntervalSeries& intervals, const HistArgs& a) {
  const BinningDefaults defaults = default_binning(intervals);
  return build_histogram(intervals, a.bin_width.value_or(defaults.bin_width),
                         a.range_max.value_or(defaults.range_max));
}

int run_hist(const HistArgs& a) {
  const IntervalSeries intervals = load_intervals(a.tags, a.n);
  const IntervalHistogram hist = histogram_for(intervals, a);
  if (a.out) write_histogram_csv(hist, *a.out);
  std::cout << "n_points=" << intervals.n_points() << '\n';
  print_kv("bin_width_s", hist.bin_width);
  print_kv("range_max_s", hist.range_max);
  std::cout << "overflow=" << hist.overflow << '\n';
  const auto fit = fit_exponential_histogram(hist, {a.min_count});
  std::cout << "bins_used=" << fit.bins_used << '\n';
  print_kv("lambda_hat_hz", fit.lambda_hat);
  print_kv("r_squared", fit.r_squared);
  return 0;
}

int run_compare(const HistArgs& a) {
  const IntervalSeries intervals = load_intervals(a.tags, a.n);
  const PoissonSraFit sra = fit_poisson_sra(intervals);
  std::cout << "method,n_points,lambda_hat_hz,score,status\n";
  std::cout << "sra," << sra.n_points << ',' << format_double(sra.lambda_hat) << ','
            << format_double(sra.r_squared) << ",ok\n";
  const IntervalHistogram hist = histogram_for(intervals, a);
  try {
    const auto fit = fit_exponential_histogram(hist, {a.min_count});
    std::cout << "histogram," << intervals.n_points() << ',' << format_double(fit.lambda_hat)
              << ',' << format_double(fit.r_squared) << ",ok\n";
  } catch (const InsufficientDataError&) {
    std::cout << "histogram," << intervals.n_points() << ",nan,nan,insufficient-data\n";
  }
  return 0;
}

// --- sweep ------------------------------------------------------------------------

struct SweepArgs {
  SimFlags sim;
  std::optional<std::string> grid;
  std::vector<std::string> datasets;
  std::size_t counts_per_point = SweepOptions{}.counts_per_point;
  std::size_t replicates = 1;
  double level = 0.99;
  unsigned threads = 0;
  std::optional<fs::path> out;
  std::optional<fs::path> emit_tags;
};

int run_sweep(const SweepArgs& a) {
  SweepOptions options;
  options.counts_per_point = a.counts_per_point;
  options.replicates = a.replicates;
  options.threshold_level = a.level;
  options.threads = a.threads;

  SweepResult result;
  if (!a.datasets.empty()) {
    std::vector<MeasuredDataset> datasets;
    for (const auto& spec : a.datasets) {
      const auto colon = spec.find(':');
      if (colon == std::string::npos) {
        throw ParseError(0, "dataset must be T_HO:PATH, got '" + spec + "'");
      }
      datasets.push_back({parse_double(spec.substr(0, colon)), fs::path(spec.substr(colon + 1))});
    }
    result = sweep_measured(datasets, options);
  } else {
    const SimConfig base = build_sim_config(a.sim);
    const std::vector<double> grid = parse_grid(*a.grid);
    result = sweep_simulated(base, grid, options);
    if (a.emit_tags) {
      fs::create_directories(*a.emit_tags);
      for (std::size_t i = 0; i < result.points.size(); ++i) {
        const SimConfig cfg =
            derive_point_config(base, result.points[i].t_ho, i, 0, options.counts_per_point);
        const SimResult sim = simulate(cfg);
        write_tags(sim.tags, *a.emit_tags / ("tho_" + std::to_string(i) + ".txt"));
      }
    }
  }

  const std::string csv = format_sweep_csv(result);
  if (a.out) {
    write_sweep_csv(result, *a.out);
  } else {
    std::cout << csv;
  }
  std::cerr << "threshold_s=" << (result.threshold ? format_double(*result.threshold) : "none")
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dark-count statistics via sequences of ranked inter-count intervals"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "darksra 0.1.0");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "simulate SPAD dark-count time tags");
  add_sim_flags(*sim_cmd, sim_args.sim, true);
  sim_cmd->add_option("--out", sim_args.out, "output time-tag file")->required();
  sim_cmd->add_option("--diag", sim_args.diag, "diagnostics sidecar file");

  AnalysisArgs sra_args;
  auto* sra_cmd = app.add_subcommand("sra", "ranked-interval SRA, fitted rate and R^2");
  sra_cmd->add_option("tags", sra_args.tags, "time-tag file")->required();
  sra_cmd->add_option("--n", sra_args.n, "use only the first N intervals");
  sra_cmd->add_option("--out", sra_args.out, "SRA CSV output");
  sra_cmd->add_option("--raw-out", sra_args.raw_out, "raw interval CSV output");
  sra_cmd->add_option("--min-points", sra_args.min_points, "minimum N for fitting");

  AnalysisArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "JSON summary of the SRA fit");
  fit_cmd->add_option("tags", fit_args.tags, "time-tag file")->required();
  fit_cmd->add_option("--n", fit_args.n, "use only the first N intervals");
  fit_cmd->add_option("--min-points", fit_args.min_points, "minimum N for fitting");

  HistArgs hist_args;
  auto* hist_cmd = app.add_subcommand("hist", "interval histogram and exponential fit");
  hist_cmd->add_option("tags", hist_args.tags, "time-tag file")->required();
  hist_cmd->add_option("--n", hist_args.n, "use only the first N intervals");
  hist_cmd->add_option("--out", hist_args.out, "histogram CSV output");
  hist_cmd->add_option("--bin-width", hist_args.bin_width, "bin width [s] (default <x>/10)");
  hist_cmd->add_option("--range-max", hist_args.range_max, "histogram range [s] (default 10<x>)");
  hist_cmd->add_option("--min-count", hist_args.min_count, "minimum counts for a fitted bin");

  HistArgs cmp_args;
  auto* cmp_cmd = app.add_subcommand("compare", "SRA vs histogram rate estimates on the same data");
  cmp_cmd->add_option("tags", cmp_args.tags, "time-tag file")->required();
  cmp_cmd->add_option("--n", cmp_args.n, "use only the first N intervals");
  cmp_cmd->add_option("--bin-width", cmp_args.bin_width, "bin width [s]");
  cmp_cmd->add_option("--range-max", cmp_args.range_max, "histogram range [s]");
  cmp_cmd->add_option("--min-count", cmp_args.min_count, "minimum counts for a fitted bin");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "R^2 as a function of hold-off time");
  add_sim_flags(*sweep_cmd, sweep_args.sim, false);
  auto* grid_opt = sweep_cmd->add_option("--grid", sweep_args.grid,
                                         "start:stop:log|lin:count or comma list [s]");
  auto* dataset_opt = sweep_cmd->add_option("--dataset", sweep_args.datasets,
                                            "T_HO:PATH measured dataset (repeatable)");
  grid_opt->excludes(dataset_opt);
  sweep_cmd->add_option("--n,--counts-per-point", sweep_args.counts_per_point,
                        "intervals per grid point");
  sweep_cmd->add_option("--replicates", sweep_args.replicates, "simulations per grid point");
  sweep_cmd->add_option("--level", sweep_args.level, "R^2 threshold level");
  sweep_cmd->add_option("--threads", sweep_args.threads, "worker threads (0 = auto)");
  sweep_cmd->add_option("--out", sweep_args.out, "sweep CSV output (default stdout)");
  sweep_cmd->add_option("--emit-tags", sweep_args.emit_tags,
                        "directory for per-point time-tag files");

  try {
    app.parse(argc, argv);
    if (*sweep_cmd && !sweep_args.grid && sweep_args.datasets.empty()) {
      throw CLI::RequiredError("--grid or --dataset");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim_cmd) return run_simulate(sim_args);
    if (*sra_cmd) return run_sra(sra_args);
    if (*fit_cmd) return run_fit(fit_args);
    if (*hist_cmd) return run_hist(hist_args);
    if (*cmp_cmd) return run_compare(cmp_args);
    if (*sweep_cmd) return run_sweep(sweep_args);
  } catch (const darksra::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
