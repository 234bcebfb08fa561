#include "mmf/capacity.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "mmf/errors.hpp"

namespace mmf {

double capacity_from_eigenvalues(const RealVector& eigenvalues, SnrSpec snr, std::size_t streams) {
  if (streams == 0) {
    throw InvalidInput("capacity needs at least one transmit stream");
  }
  const double scale = snr.linear() / static_cast<double>(streams);
  // Runs of equal eigenvalues are summed as count * term, so a flat spectrum
  // gives exactly M log2(1 + snr / M).
  double total = 0.0;
  for (Index n = 0; n < eigenvalues.size();) {
    Index run = 1;
    while (n + run < eigenvalues.size() && eigenvalues(n + run) == eigenvalues(n)) ++run;
    total += static_cast<double>(run) * std::log2(1.0 + scale * eigenvalues(n));
    n += run;
  }
  return total;
}

double flat_capacity(const ComplexMatrix& h, SnrSpec snr, std::size_t streams) {
  if (streams == 0) {
    throw InvalidInput("capacity needs at least one transmit stream");
  }
  return capacity_from_eigenvalues(channel_eigenvalues(h), snr, streams);
}

double normalized_capacity(const RealVector& eigenvalues, const NormalizationConstant& norm,
                           SnrSpec snr, std::size_t streams) {
  if (norm.mode == NormalizationMode::per_index) {
    if (norm.per_index_mean.size() != eigenvalues.size()) {
      throw ConfigurationMismatch("per-index normalization has the wrong length");
    }
    return capacity_from_eigenvalues(eigenvalues.cwiseQuotient(norm.per_index_mean), snr, streams);
  }
  return capacity_from_eigenvalues(eigenvalues / norm.mean_eigenvalue, snr, streams);
}

double ofdm_capacity(std::span<const ComplexMatrix> responses, SnrSpec snr, std::size_t streams) {
  if (responses.empty()) {
    throw InvalidInput("ofdm_capacity needs at least one sub-carrier");
  }
  const Index rows = responses.front().rows();
  const Index cols = responses.front().cols();
  double total = 0.0;
  for (const auto& h : responses) {
    if (h.rows() != rows || h.cols() != cols) {
      throw InvalidDimension("ofdm_capacity: sub-carrier responses differ in shape");
    }
    total += flat_capacity(h, snr, streams);
  }
  return total / static_cast<double>(responses.size());
}

NormalizationConstant estimate_normalization(const PropagationConfig& config, std::size_t trials,
                                             Rng& rng) {
  if (trials < 100) {
    throw InvalidInput("estimate_normalization needs at least 100 trials");
  }
  config.validate();
  NormalizationConstant norm;
  norm.trials_used = trials;
  norm.scope = "intrinsic " + describe(config);
  if (config.lossless()) {
    norm.mean_eigenvalue = 1.0;
    norm.per_index_mean = RealVector::Ones(config.modes);
    return norm;
  }
  RealVector sum = RealVector::Zero(config.modes);
  for (std::size_t t = 0; t < trials; ++t) {
    sum += channel_eigenvalues(sample_channel(config, rng));
  }
  norm.per_index_mean = sum / static_cast<double>(trials);
  norm.mean_eigenvalue = norm.per_index_mean.mean();
  return norm;
}

PowerAllocation waterfill(const RealVector& gains, double total_power) {
  if (!(total_power > 0.0) || !std::isfinite(total_power)) {
    throw InvalidInput("waterfill: total power must be positive");
  }
  std::vector<Index> active;
  for (Index n = 0; n < gains.size(); ++n) {
    if (!std::isfinite(gains(n)) || gains(n) < 0.0) {
      throw InvalidInput("waterfill: gains must be finite and non-negative");
    }
    if (gains(n) > 0.0) active.push_back(n);
  }
  if (active.empty()) {
    throw NoFeasibleAllocation("waterfill: every gain is zero");
  }
  std::sort(active.begin(), active.end(), [&](Index a, Index b) { return gains(a) > gains(b); });

  // Largest k whose water level clears the k-th strongest channel's floor.
  double level = 0.0;
  double inverse_sum = 0.0;
  std::vector<double> prefix(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) {
    inverse_sum += 1.0 / gains(active[k]);
    prefix[k] = inverse_sum;
  }
  for (std::size_t k = active.size(); k-- > 0;) {
    level = (total_power + prefix[k]) / static_cast<double>(k + 1);
    if (level > 1.0 / gains(active[k])) break;
  }

  auto allocate = [&](double mu) {
    RealVector p = RealVector::Zero(gains.size());
    for (Index n : active) p(n) = std::max(0.0, mu - 1.0 / gains(n));
    return p;
  };
  RealVector powers = allocate(level);
  if (std::abs(powers.sum() - total_power) > 1e-9 * total_power) {
    double lo = 0.0;
    double hi = total_power + prefix.back();
    for (int iter = 0; iter < 200; ++iter) {
      level = 0.5 * (lo + hi);
      (allocate(level).sum() > total_power ? hi : lo) = level;
    }
    powers = allocate(level);
  }
  return {std::move(powers), level};
}

double allocated_capacity(const RealVector& gains, const RealVector& powers) {
  if (gains.size() != powers.size()) {
    throw InvalidDimension("allocated_capacity: gains and powers differ in length");
  }
  double total = 0.0;
  for (Index n = 0; n < gains.size(); ++n) total += std::log2(1.0 + gains(n) * powers(n));
  return total;
}

}  // namespace mmf
