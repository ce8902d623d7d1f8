#pragma once

// Reference computations used by the tests. None of these call into the
// library's analysis code.

#include <cmath>
#include <cstddef>
#include <functional>
#include <set>
#include <span>
#include <vector>

namespace darksra::test {

// ln(1000) to 30 digits (mpmath, mp.dps = 30).
inline constexpr long double kLn1000 = 6.90775527898213705205397436405L;

// Kolmogorov limiting distribution quantile at 0.99 (scipy kstwobign.ppf).
inline constexpr double kKolmogorovQuantile99 = 1.6276236115189502;

/// E[n-th largest of N iid Exp(1)] = sum_{i=n}^{N} 1/i.
inline double exact_order_statistic_mean(std::size_t rank, std::size_t n_points) {
  long double sum = 0.0L;
  for (std::size_t i = rank; i <= n_points; ++i) sum += 1.0L / static_cast<long double>(i);
  return static_cast<double>(sum);
}

/// Var[n-th largest of N iid Exp(1)] = sum_{i=n}^{N} 1/i^2.
inline double exact_order_statistic_variance(std::size_t rank, std::size_t n_points) {
  long double sum = 0.0L;
  for (std::size_t i = rank; i <= n_points; ++i) {
    sum += 1.0L / (static_cast<long double>(i) * static_cast<long double>(i));
  }
  return static_cast<double>(sum);
}

/// Descending order via a multiset, independent of std::sort.
inline std::vector<double> multiset_descending(std::span<const double> values) {
  const std::multiset<double, std::greater<>> sorted(values.begin(), values.end());
  return {sorted.begin(), sorted.end()};
}

/// Two-pass R^2 in extended precision.
inline double reference_r_squared(std::span<const double> y, std::span<const double> f) {
  long double mean = 0.0L;
  for (const double v : y) mean += v;
  mean /= static_cast<long double>(y.size());
  long double res = 0.0L, tot = 0.0L;
  for (std::size_t i = 0; i < y.size(); ++i) {
    res += (static_cast<long double>(y[i]) - f[i]) * (static_cast<long double>(y[i]) - f[i]);
    tot += (static_cast<long double>(y[i]) - mean) * (static_cast<long double>(y[i]) - mean);
  }
  return static_cast<double>(1.0L - res / tot);
}

/// The fixture x_n = ln(N/(n-1)) for n = 2..N with x_1 = N - sum(x_2..x_N),
/// so that the mean is exactly 1 (in exact arithmetic). Returned in rank
/// order n = 1..N.
inline std::vector<double> analytic_sra_fixture(std::size_t n_points) {
  std::vector<double> x(n_points);
  long double tail = 0.0L;
  for (std::size_t n = 2; n <= n_points; ++n) {
    x[n - 1] = std::log(static_cast<double>(n_points) / static_cast<double>(n - 1));
    tail += std::log(static_cast<long double>(n_points) / static_cast<long double>(n - 1));
  }
  x[0] = static_cast<double>(static_cast<long double>(n_points) - tail);
  return x;
}

inline double mean_of(std::span<const double> v) {
  long double s = 0.0L;
  for (const double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

inline double sample_std(std::span<const double> v) {
  const double m = mean_of(v);
  long double s = 0.0L;
  for (const double x : v) s += (x - m) * (x - m);
  return static_cast<double>(std::sqrt(s / static_cast<long double>(v.size() - 1)));
}

}  // namespace darksra::test
