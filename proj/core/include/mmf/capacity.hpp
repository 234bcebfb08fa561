#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "mmf/fiber.hpp"
#include "mmf/linalg.hpp"
#include "mmf/rng.hpp"

namespace mmf {

/// SNR = P / (N0 W), carried in dB.
struct SnrSpec {
  double snr_db = 0.0;

  double linear() const { return std::pow(10.0, snr_db / 10.0); }
};

enum class NormalizationMode {
  /// Divide every eigenvalue by the mean pooled over all modes and trials.
  pooled,
  /// Divide the n-th largest eigenvalue by the mean of the n-th largest.
  per_index,
};

/// Monte-Carlo estimate of E[lambda^2] used to energy-normalize eigenvalues.
struct NormalizationConstant {
  double mean_eigenvalue = 1.0;
  std::size_t trials_used = 1;
  /// Channel family the estimate belongs to; see describe().
  std::string scope;
  NormalizationMode mode = NormalizationMode::pooled;
  /// Mean of each sorted eigenvalue; only read in per_index mode.
  RealVector per_index_mean;
};

/// sum_n log2(1 + (snr / streams) * lambda_n^2) over the eigenvalues of H H*.
/// Throws InvalidInput when streams == 0.
double flat_capacity(const ComplexMatrix& h, SnrSpec snr, std::size_t streams);

/// Same formula on precomputed eigenvalues lambda_n^2.
double capacity_from_eigenvalues(const RealVector& eigenvalues, SnrSpec snr, std::size_t streams);

/// Capacity after dividing the eigenvalues by `norm` (pooled or per index).
double normalized_capacity(const RealVector& eigenvalues, const NormalizationConstant& norm,
                           SnrSpec snr, std::size_t streams);

/// Mean of flat_capacity over sub-carrier responses.
/// Throws InvalidInput on an empty list, InvalidDimension on mixed shapes.
double ofdm_capacity(std::span<const ComplexMatrix> responses, SnrSpec snr, std::size_t streams);

/// Pooled mean of lambda_n^2 over `trials` independent realizations at w = 0.
/// A lossless configuration returns exactly 1 without sampling.
/// Throws InvalidInput when trials < 100.
NormalizationConstant estimate_normalization(const PropagationConfig& config, std::size_t trials,
                                             Rng& rng);

struct PowerAllocation {
  RealVector powers;
  double water_level = 0.0;
};

/// Waterfilling: p_n = max(0, mu - 1/g_n) with sum p_n = total_power.
/// Zero gains receive no power. Throws NoFeasibleAllocation when every gain is
/// zero and InvalidInput on negative gains or a non-positive budget.
PowerAllocation waterfill(const RealVector& gains, double total_power);

/// sum_n log2(1 + g_n p_n).
double allocated_capacity(const RealVector& gains, const RealVector& powers);

}  // namespace mmf
