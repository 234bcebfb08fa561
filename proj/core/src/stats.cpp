#include "mmf/stats.hpp"

#include <algorithm>
#include <cmath>

#include "mmf/errors.hpp"

namespace mmf {

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw InvalidInput("KS statistic needs two non-empty samples");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n1 - static_cast<double>(j) / n2));
  }
  return d;
}

double ks_uniform_statistic(std::vector<double> samples, double lo, double hi) {
  if (samples.empty()) {
    throw InvalidInput("KS statistic needs a non-empty sample");
  }
  if (!(hi > lo)) {
    throw InvalidInput("uniform support must have hi > lo");
  }
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double cdf = std::clamp((samples[i] - lo) / (hi - lo), 0.0, 1.0);
    const double k = static_cast<double>(i);
    d = std::max({d, (k + 1.0) / n - cdf, cdf - k / n});
  }
  return d;
}

namespace {

double ks_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput("significance level must lie in (0, 1)");
  }
  return std::sqrt(-std::log(alpha / 2.0) / 2.0);
}

}  // namespace

double ks_critical_value(std::size_t n1, std::size_t n2, double alpha) {
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  return ks_coefficient(alpha) * std::sqrt((a + b) / (a * b));
}

double ks_critical_value(std::size_t n, double alpha) {
  return ks_coefficient(alpha) / std::sqrt(static_cast<double>(n));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double alpha) {
  KsResult result;
  result.n1 = a.size();
  result.n2 = b.size();
  result.critical_value = ks_critical_value(result.n1, result.n2, alpha);
  result.statistic = ks_statistic(std::move(a), std::move(b));
  return result;
}

Moments sample_moments(std::span<const double> values) {
  Moments m;
  m.count = values.size();
  if (values.empty()) {
    return m;
  }
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  m.mean = sum / n;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m.stddev = std::sqrt(m2);
  m.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  return m;
}

}  // namespace mmf
