#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mmf {

/// Outcome of a Kolmogorov-Smirnov test at a fixed significance level.
struct KsResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  std::size_t n1 = 0;
  std::size_t n2 = 0;

  /// The null hypothesis (same distribution) is retained.
  bool passed() const noexcept { return statistic < critical_value; }
};

/// Two-sample KS distance sup |F_a - F_b|. Ties are handled by advancing
/// through equal values in both samples, so identical samples give 0.
double ks_statistic(std::vector<double> a, std::vector<double> b);

/// One-sample KS distance against the uniform CDF on [lo, hi).
double ks_uniform_statistic(std::vector<double> samples, double lo, double hi);

/// Asymptotic critical value c(alpha) * sqrt((n1 + n2) / (n1 n2)),
/// c(alpha) = sqrt(-ln(alpha / 2) / 2).
double ks_critical_value(std::size_t n1, std::size_t n2, double alpha);

/// One-sample asymptotic critical value c(alpha) / sqrt(n).
double ks_critical_value(std::size_t n, double alpha);

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha);

struct Moments {
  std::size_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // population (1/n) convention
  double skewness = 0.0;
};

Moments sample_moments(std::span<const double> values);

}  // namespace mmf
