#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mmf/capacity.hpp"
#include "mmf/fiber.hpp"
#include "mmf/linalg.hpp"

namespace mmf {

enum class ScenarioKind { intrinsic_all_modes, controlled, random_coupling, nmode_baseline, ideal_fiber };

/// Short names: intrinsic, controlled, random, nmode, ideal.
std::string to_string(ScenarioKind kind);
/// Accepts the short names and the enumerator spellings. Throws ConfigError.
ScenarioKind parse_scenario_kind(const std::string& text);

struct Scenario {
  ScenarioKind kind = ScenarioKind::intrinsic_all_modes;
  PropagationConfig config;
  Index n_t = 4;
  Index n_r = 4;
  std::vector<SnrSpec> snr_grid;

  void validate() const;
  /// Transmit streams sharing the power: M for intrinsic, n_t otherwise.
  std::size_t streams() const;
  /// Fiber actually sampled: an n_t-mode fiber for nmode, K = 1 and xi = 0 at
  /// n_t modes for ideal, the configured fiber otherwise.
  PropagationConfig effective_config() const;
  /// Every trial yields unit eigenvalues, so nothing needs sampling.
  bool deterministic() const;
};

/// Tag a normalization constant must carry to be applied to `scenario`.
std::string normalization_scope(const Scenario& scenario);

/// SNR grid start, start + step, ... up to stop (inclusive, with slack for
/// rounding). Throws ConfigError unless start <= stop and step > 0.
std::vector<SnrSpec> snr_range(double start_db, double stop_db, double step_db);

struct SnrPoint {
  double snr_db = 0.0;
  double capacity_mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

struct SweepResult {
  Scenario scenario;
  std::vector<SnrPoint> per_snr;
};

struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  std::size_t total = 0;

  std::size_t bins() const noexcept { return counts.size(); }
  double width(std::size_t i) const { return edges[i + 1] - edges[i]; }
  double center(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
  /// counts[i] / (total * width(i)); integrates to one.
  double density(std::size_t i) const;
};

/// Runs body(i) for i in [0, n) on up to `workers` threads. The first
/// exception thrown by any call is rethrown after all threads join.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body);

/// Eigenvalues of H_t H_t* for one trial of `scenario` (H itself for intrinsic).
RealVector trial_eigenvalues(const Scenario& scenario, Rng& rng);

/// Trial-level eigenvalues for scenarios that share one fiber realization per
/// trial. All members must have the same kind of fiber: intrinsic, controlled
/// or random over the same config. Trial t draws from derive_seed(seed, t).
std::vector<std::vector<RealVector>> shared_trial_eigenvalues(std::span<const Scenario> group,
                                                              std::size_t trials,
                                                              std::uint64_t seed,
                                                              std::size_t workers = 1);

/// Pooled mean of the scenario's effective eigenvalues over `trials` trials.
/// Deterministic scenarios return exactly 1. Throws InvalidInput when
/// trials < 100.
NormalizationConstant estimate_scenario_normalization(const Scenario& scenario, std::size_t trials,
                                                      std::uint64_t seed, std::size_t workers = 1,
                                                      NormalizationMode mode = NormalizationMode::pooled);

/// Normalization from precomputed per-trial eigenvalues.
NormalizationConstant normalization_from_samples(const Scenario& scenario,
                                                 std::span<const RealVector> eigenvalues,
                                                 NormalizationMode mode = NormalizationMode::pooled);

/// Mean and standard error (sample std / sqrt(trials)) of the normalized
/// capacity at every grid point.
SweepResult summarize(const Scenario& scenario, std::span<const RealVector> eigenvalues,
                      const NormalizationConstant& norm);

/// Ergodic capacity over `trials` sub-seeded trials; bit-identical for any
/// worker count. Throws ConfigurationMismatch when `norm` was estimated for a
/// different scenario, InvalidInput when trials == 0.
SweepResult ergodic_capacity(const Scenario& scenario, std::size_t trials, std::uint64_t master_seed,
                             const NormalizationConstant& norm, std::size_t workers = 1);

/// Pooled rho = 2 ln(lambda) over all modes and trials at w = 0, in trial order.
std::vector<double> mdl_samples(const PropagationConfig& config, std::size_t trials,
                                std::uint64_t master_seed, std::size_t workers = 1);

/// Equal-width bins spanning [min, max]. A zero-width sample set is placed at
/// the center of the middle bin of a unit-width range.
/// Throws InvalidInput on empty samples or zero bins.
Histogram make_histogram(std::span<const double> samples, std::size_t bins);

/// Throws InvalidInput unless trials * M >= 10 * bins.
Histogram mdl_histogram(const PropagationConfig& config, std::size_t trials, std::size_t bins,
                        std::uint64_t master_seed, std::size_t workers = 1);

struct SemicircleFit {
  double center = 0.0;
  double radius = 0.0;
  double r_squared = 0.0;
};

/// Least-squares fit of the unit-area semicircle (2 / (pi R^2)) sqrt(R^2 - (x - c)^2)
/// to the histogram densities at the bin centers, with c and R free.
SemicircleFit semicircle_fit(const Histogram& histogram);

/// Horizontal gap between two capacity curves: for each grid point of
/// `reference`, the SNR at which `other` reaches the same capacity (linear
/// interpolation in dB, end segments extrapolated) minus the reference SNR.
/// Positive values mean `other` needs more SNR.
std::vector<double> horizontal_offset_db(const SweepResult& reference, const SweepResult& other);

struct Figure4Options {
  Index modes = 100;
  Index streams = 4;
  Index sections = 256;
  double xi_db = 4.0;
  MdlCorrelation mdl_correlation = MdlCorrelation::independent;
  std::vector<SnrSpec> snr_grid;
  std::size_t trials = 2000;
  std::size_t norm_trials = 10000;
  std::uint64_t master_seed = 1;
  std::size_t workers = 1;
  NormalizationMode normalization = NormalizationMode::pooled;
};

/// Sweeps in the order intrinsic, controlled, random, nmode, ideal.
/// Intrinsic, controlled and random share one fiber per trial; the n-mode
/// baseline uses its own stream. Each scenario is normalized by its own
/// pooled mean eigenvalue.
std::vector<SweepResult> figure4_comparison(const Figure4Options& options);

}  // namespace mmf
