// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance below is fixed; seeds derive from
// kAcceptanceSeed through derive_stream_seed(kAcceptanceSeed, criterion, k).

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "darksra/errors.hpp"
#include "darksra/histogram.hpp"
#include "darksra/io.hpp"
#include "darksra/random.hpp"
#include "darksra/simulator.hpp"
#include "darksra/sra.hpp"
#include "darksra/sweep.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace darksra;

namespace {

constexpr std::uint64_t kAcceptanceSeed = 1;
constexpr std::size_t kN = 1000;

struct Verdict {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

std::string num(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Every simulated dataset passes through here so criterion 8 can report
// the dead-time invariant over all of them.
struct DeadTimeLedger {
  std::size_t datasets = 0;
  std::size_t violations = 0;
} g_dead_time;

SimResult simulate_checked(const SimConfig& config) {
  SimResult r = simulate(config);
  const auto dead = holdoff_ticks(config);
  const auto tags = r.tags.tags();
  ++g_dead_time.datasets;
  for (std::size_t i = 1; i < tags.size(); ++i) {
    if (tags[i] - tags[i - 1] < dead) {
      ++g_dead_time.violations;
      break;
    }
  }
  return r;
}

SimConfig config_for(double p_ap, double holdoff, std::uint64_t seed, std::uint64_t counts) {
  SimConfig c;
  c.dark_rate = 1000.0;
  c.holdoff = holdoff;
  c.afterpulse_prob = p_ap;
  c.detrap_tau = 2e-6;
  c.target_counts = counts;
  c.seed = seed;
  return c;
}

IntervalSeries sim_intervals(const SimConfig& c) {
  return intervals_from_tags(simulate_checked(c).tags);
}

// 1. 100 pure-Poisson runs at N = 1000: R^2 >= 0.99 in at least 95, < 10 s.
Verdict criterion1() {
  Verdict v{1, "Poisson-regime fit quality"};
  std::size_t passing = 0;
  double worst = 1.0;
  for (std::uint64_t k = 0; k < 100; ++k) {
    const auto c = config_for(0.0, 0.0, derive_stream_seed(kAcceptanceSeed, 1, k), kN + 1);
    const double r2 = fit_poisson_sra(sim_intervals(c)).r_squared;
    passing += r2 >= 0.99;
    worst = std::min(worst, r2);
  }
  v.pass = passing >= 95;
  v.detail = std::to_string(passing) + "/100 runs with R^2 >= 0.99 (need >= 95), min R^2 " +
             num(worst, 6);
  return v;
}

// 2. Afterpulsing at t_ho = 0.1 us: median R^2 over 20 seeds at least 0.05
//    below the matched Poisson median, < 10 s.
Verdict criterion2() {
  Verdict v{2, "Afterpulsing detection"};
  std::vector<double> ap, pure;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto seed = derive_stream_seed(kAcceptanceSeed, 2, k);
    ap.push_back(fit_poisson_sra(sim_intervals(config_for(0.3, 0.1e-6, seed, kN + 1))).r_squared);
    pure.push_back(fit_poisson_sra(sim_intervals(config_for(0.0, 0.1e-6, seed, kN + 1))).r_squared);
  }
  const double m_ap = median(ap), m_pure = median(pure);
  v.pass = m_pure - m_ap >= 0.05;
  v.detail = "median R^2 afterpulsing " + num(m_ap) + " vs Poisson " + num(m_pure) +
             " (gap " + num(m_pure - m_ap) + ", need >= 0.05)";
  return v;
}

// 3. Log-grid sweep 0.1..40 us, 20 points x 20 seeds: Spearman > 0.8 and a
//    sustained-0.99 threshold inside [tau, 20 tau], < 2 min.
Verdict criterion3() {
  Verdict v{3, "Threshold curve"};
  const auto grid = parse_grid("0.1e-6:40e-6:log:20");
  SweepOptions opt;
  opt.replicates = 20;
  opt.counts_per_point = kN;
  auto base = config_for(0.3, 0.0, derive_stream_seed(kAcceptanceSeed, 3), 1);
  const SweepResult r = sweep_simulated(base, grid, opt);
  // The sweep runs its own simulations; regenerate a subset and check them.
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t rep = 0; rep < opt.replicates; rep += 5) {
      simulate_checked(derive_point_config(base, grid[i], i, rep, opt.counts_per_point));
    }
  }

  std::vector<double> t, r2;
  bool all_ok = true;
  for (const auto& p : r.points) {
    all_ok &= p.ok();
    t.push_back(p.t_ho);
    r2.push_back(p.r_squared);
  }
  const double rho = all_ok ? spearman_correlation(t, r2) : std::nan("");
  const double tau = 2e-6;
  const bool threshold_ok = r.threshold && *r.threshold >= tau && *r.threshold <= 20 * tau;
  v.pass = all_ok && rho > 0.8 && threshold_ok;
  v.detail = "Spearman " + num(rho) + " (need > 0.8), threshold " +
             (r.threshold ? num(*r.threshold * 1e6) + " us" : std::string("none")) +
             " (need within [2, 40] us)";
  return v;
}

// 4. 20 Poisson runs: pointwise std/mean of x_n/<x> <= 5% at every mid-rank
//    N/4 <= n <= 3N/4, and std(R^2) <= 0.01.
Verdict criterion4() {
  Verdict v{4, "Reproducibility"};
  std::vector<std::vector<double>> curves;
  std::vector<double> r2;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto c = config_for(0.0, 0.0, derive_stream_seed(kAcceptanceSeed, 4, k), kN + 1);
    const auto fit = fit_poisson_sra(sim_intervals(c));
    curves.push_back(fit.normalized_observed);
    r2.push_back(fit.r_squared);
  }
  double worst = 0.0;
  std::size_t worst_rank = 0;
  std::vector<double> spreads;
  for (std::size_t n = kN / 4; n <= 3 * kN / 4; ++n) {
    std::vector<double> column;
    for (const auto& c : curves) column.push_back(c[n - 2]);
    const double spread = test::sample_std(column) / test::mean_of(column);
    spreads.push_back(spread);
    if (spread > worst) {
      worst = spread;
      worst_rank = n;
    }
  }
  const double r2_std = test::sample_std(r2);
  v.pass = worst <= 0.05 && r2_std <= 0.01;
  v.detail = "max mid-rank spread " + num(100 * worst, 3) + "% at n=" + std::to_string(worst_rank) +
             " (need <= 5%), median " + num(100 * median(spreads), 3) + "%, std R^2 " +
             num(r2_std, 3) + " (need <= 0.01)";
  return v;
}

// 5. 10^4 trials of N = 100 Exp(1): MC mean of each descending order
//    statistic within 3 SE of sum_{i=n}^N 1/i; ln(N/(n-1)) within that band
//    plus 1/(2(n-1)); < 30 s.
Verdict criterion5() {
  Verdict v{5, "Order-statistics oracle"};
  const std::size_t n_points = 100, trials = 10'000;
  std::vector<double> sum(n_points, 0.0), sum_sq(n_points, 0.0), sample(n_points);
  Rng rng(derive_stream_seed(kAcceptanceSeed, 5));
  for (std::size_t t = 0; t < trials; ++t) {
    for (auto& x : sample) x = rng.exponential(1.0);
    const auto ranked = rank_descending(IntervalSeries(sample));
    for (std::size_t i = 0; i < n_points; ++i) {
      sum[i] += ranked.ranked()[i];
      sum_sq[i] += ranked.ranked()[i] * ranked.ranked()[i];
    }
  }
  std::size_t mc_misses = 0, eq_misses = 0;
  double worst_z = 0.0;
  for (std::size_t rank = 1; rank <= n_points; ++rank) {
    const double mean = sum[rank - 1] / trials;
    const double var = (sum_sq[rank - 1] - trials * mean * mean) / (trials - 1);
    const double se = std::sqrt(var / trials);
    const double exact = test::exact_order_statistic_mean(rank, n_points);
    worst_z = std::max(worst_z, std::abs(mean - exact) / se);
    mc_misses += std::abs(mean - exact) > 3.0 * se;
    if (rank >= 2) {
      const double eq = poisson_sra_prediction(rank, n_points, 1.0);
      eq_misses += std::abs(eq - mean) > 3.0 * se + 0.5 / static_cast<double>(rank - 1);
    }
  }
  v.pass = mc_misses == 0 && eq_misses == 0;
  v.detail = "ranks outside 3 SE: " + std::to_string(mc_misses) + " (max |z| " + num(worst_z, 3) +
             "), ln(N/(n-1)) outside band: " + std::to_string(eq_misses);
  return v;
}

// 6. 50 seeds of 10^4 Exp(1000) draws: mean rate within 1000 +- 30, std in [7, 13].
Verdict criterion6() {
  Verdict v{6, "Rate estimator calibration"};
  std::vector<double> lambdas;
  std::vector<double> draws(10'000);
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng rng(derive_stream_seed(kAcceptanceSeed, 6, k));
    for (auto& x : draws) x = rng.exponential(1e-3);
    lambdas.push_back(estimate_lambda(IntervalSeries(draws)));
  }
  const double m = test::mean_of(lambdas), s = test::sample_std(lambdas);
  v.pass = std::abs(m - 1000.0) <= 30.0 && s >= 7.0 && s <= 13.0;
  v.detail = "mean " + num(m, 6) + " 1/s (need 1000 +- 30), std " + num(s, 4) +
             " 1/s (need [7, 13])";
  return v;
}

// 7. At N = 10^3 the histogram rate RMS error exceeds the MLE's by >= 1.5x
//    (or the fit reports insufficient data); at N = 10^6 it is within 2%.
Verdict criterion7() {
  Verdict v{7, "Sample-efficiency comparison"};
  double hist_sq = 0.0, mle_sq = 0.0;
  std::size_t insufficient = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto intervals =
        sim_intervals(config_for(0.0, 0.0, derive_stream_seed(kAcceptanceSeed, 7, k), kN + 1));
    const double mle = fit_poisson_sra(intervals).lambda_hat;
    mle_sq += (mle - 1000.0) * (mle - 1000.0);
    const auto bins = default_binning(intervals);
    try {
      const auto fit =
          fit_exponential_histogram(build_histogram(intervals, bins.bin_width, bins.range_max));
      hist_sq += (fit.lambda_hat - 1000.0) * (fit.lambda_hat - 1000.0);
    } catch (const InsufficientDataError&) {
      ++insufficient;
    }
  }
  const double hist_rms = std::sqrt(hist_sq / static_cast<double>(50 - insufficient));
  const double mle_rms = std::sqrt(mle_sq / 50.0);
  const bool small_ok = insufficient > 0 || hist_rms >= 1.5 * mle_rms;

  const auto big = sim_intervals(
      config_for(0.0, 0.0, derive_stream_seed(kAcceptanceSeed, 7, 1000), 1'000'001));
  const auto bins = default_binning(big);
  const auto fit = fit_exponential_histogram(build_histogram(big, bins.bin_width, bins.range_max));
  const double rel = std::abs(fit.lambda_hat - 1000.0) / 1000.0;

  v.pass = small_ok && rel <= 0.02;
  v.detail = "N=1e3: histogram RMS " + num(hist_rms) + " vs MLE RMS " + num(mle_rms) + " (ratio " +
             num(hist_rms / mle_rms, 3) + ", need >= 1.5), insufficient " +
             std::to_string(insufficient) + "; N=1e6: histogram error " + num(100 * rel, 3) +
             "% (need <= 2%)";
  return v;
}

// 8. Exact-fit identities and the dead-time invariant.
Verdict criterion8() {
  Verdict v{8, "Exact-fit identities"};
  std::vector<std::string> notes;
  bool pass = true;

  Rng rng(derive_stream_seed(kAcceptanceSeed, 8));
  std::vector<double> y(500);
  for (auto& x : y) x = rng.exponential(1.0);
  const bool identity = r_squared(y, y) == 1.0;
  pass &= identity;
  notes.push_back(std::string("r2(y,y)=1 ") + (identity ? "ok" : "FAILED"));

  const auto fixture = test::analytic_sra_fixture(kN);
  const double fixture_r2 = fit_poisson_sra(IntervalSeries(fixture)).r_squared;
  const bool fixture_ok = std::abs(fixture_r2 - 1.0) <= 1e-9;
  pass &= fixture_ok;
  notes.push_back("analytic fixture R^2 " + num(fixture_r2, 10) + (fixture_ok ? " ok" : " FAILED") +
                  (fixture_ok ? "" : " (x_1=" + num(fixture[0], 6) + " < x_2=" +
                                         num(fixture[1], 6) + ": fixture is not descending)"));

  bool singular = false;
  try {
    poisson_sra_prediction(1, kN, 1.0);
  } catch (const SingularityError&) {
    singular = true;
  }
  pass &= singular;
  notes.push_back(std::string("n=1 singularity ") + (singular ? "ok" : "FAILED"));

  const bool dead_ok = g_dead_time.violations == 0 && g_dead_time.datasets > 0;
  pass &= dead_ok;
  notes.push_back("dead-time violations " + std::to_string(g_dead_time.violations) + " in " +
                  std::to_string(g_dead_time.datasets) + " datasets");

  v.pass = pass;
  for (std::size_t i = 0; i < notes.size(); ++i) v.detail += (i ? "; " : "") + notes[i];
  return v;
}

// 9. simulate -> sra -> sweep through the CLI twice: byte-identical outputs.
Verdict criterion9() {
  Verdict v{9, "Pipeline determinism"};
#ifndef DARKSRA_CLI_PATH
  v.detail = "CLI not built";
  return v;
#else
  const fs::path root = fs::temp_directory_path() / "darksra_acceptance_c9";
  fs::remove_all(root);
  auto run = [](const std::string& args) {
    const int status = std::system((std::string(DARKSRA_CLI_PATH) + " " + args + " >/dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  int failures = 0;
  for (const char* run_name : {"a", "b"}) {
    const fs::path dir = root / run_name;
    fs::create_directories(dir);
    failures += run("simulate --dark-rate 1000 --holdoff 1e-7 --ap-prob 0.3 --detrap-tau 2e-6 "
                    "--counts 1001 --seed 42 --out " + (dir / "tags.txt").string()) != 0;
    failures += run("sra " + (dir / "tags.txt").string() + " --out " + (dir / "sra.csv").string()) != 0;
    failures += run("sweep --grid 0.1e-6:40e-6:log:20 --dark-rate 1000 --ap-prob 0.3 "
                    "--detrap-tau 2e-6 --seed 42 --out " + (dir / "sweep.csv").string()) != 0;
  }
  bool identical = failures == 0;
  for (const char* file : {"tags.txt", "sra.csv", "sweep.csv"}) {
    const auto a = slurp(root / "a" / file);
    identical &= !a.empty() && a == slurp(root / "b" / file);
  }
  fs::remove_all(root);
  v.pass = identical;
  v.detail = std::string("tags.txt, sra.csv, sweep.csv ") +
             (identical ? "byte-identical across runs" : "DIFFER or a command failed");
  return v;
#endif
}

}  // namespace

int main() {
  struct Entry {
    std::function<Verdict()> run;
    double budget_s;  // 0: no runtime bound
  };
  const std::vector<Entry> entries{
      {criterion1, 10.0}, {criterion2, 10.0}, {criterion3, 120.0}, {criterion4, 0.0},
      {criterion5, 30.0}, {criterion6, 0.0},  {criterion7, 0.0},   {criterion9, 0.0},
      {criterion8, 0.0},
  };

  std::vector<Verdict> verdicts;
  for (const auto& entry : entries) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = entry.run();
    } catch (const std::exception& e) {
      v.detail = std::string("exception: ") + e.what();
    }
    v.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (entry.budget_s > 0.0 && v.seconds > entry.budget_s) {
      v.pass = false;
      v.detail += "; runtime " + num(v.seconds, 3) + " s exceeds " + num(entry.budget_s) + " s";
    }
    verdicts.push_back(v);
  }

  std::sort(verdicts.begin(), verdicts.end(),
            [](const Verdict& a, const Verdict& b) { return a.id < b.id; });
  int failed = 0;
  for (const auto& v : verdicts) {
    failed += !v.pass;
    std::printf("[%s] criterion %d %-30s %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", v.id,
                v.title.c_str(), v.detail.c_str(), v.seconds);
  }
  std::printf("%zu/%zu criteria passed\n", verdicts.size() - static_cast<std::size_t>(failed),
              verdicts.size());
  return failed == 0 ? 0 : 1;
}
