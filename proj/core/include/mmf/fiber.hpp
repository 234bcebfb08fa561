#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "mmf/linalg.hpp"
#include "mmf/rng.hpp"
#include "mmf/stats.hpp"

namespace mmf {

inline constexpr double kDefaultSignificance = 0.01;

/// Convert an accumulated MDL standard deviation from dB to log-power units
/// (multiply by ln(10)/10), and back.
double db_to_log_power(double db);
double log_power_to_db(double log_power);

enum class MdlCorrelation { independent, fully_correlated };

std::string to_string(MdlCorrelation c);
MdlCorrelation parse_mdl_correlation(const std::string& text);

/// Statistical description of a K-section fiber with M modes.
struct PropagationConfig {
  Index modes = 1;
  Index sections = 1;
  /// Accumulated MDL standard deviation xi, in dB.
  double xi_db = 0.0;
  /// Per-section group-delay standard deviation, seconds.
  double gd_std = 10e-12;
  /// Per-section GVD standard deviation, seconds^2.
  double gvd_std = 0.0;
  MdlCorrelation mdl_correlation = MdlCorrelation::independent;
  bool include_mdps = true;
  bool include_gd = true;
  bool include_gvd = false;
  /// Optional per-section MDL standard deviations (log-power units). When
  /// non-empty it must have `sections` entries whose squares sum to xi^2.
  std::vector<double> section_mdl_std;

  /// Throws InvalidInput / InvalidDimension on a broken invariant.
  void validate() const;

  /// xi in log-power units.
  double xi_log_power() const;
  /// Standard deviation of every MDL entry of section k (0-based).
  double section_sigma(Index k) const;
  /// xi == 0: every section is unitary, so every response is unitary.
  bool lossless() const noexcept { return xi_db == 0.0; }

  bool operator==(const PropagationConfig&) const = default;
};

/// One section's random draw: H^k(w) = U diag(exp(g/2 - j theta - j w tau - j w^2 alpha)) V*.
struct SectionParams {
  UnitaryMatrix u;
  UnitaryMatrix v;
  RealVector g;
  RealVector theta;
  RealVector tau;
  RealVector alpha;
};

struct FiberRealization {
  PropagationConfig config;
  std::vector<SectionParams> sections;

  Index modes() const noexcept { return config.modes; }
};

/// SVD of an end-to-end response with descending singular values and the
/// end-to-end MDL vector rho_n = 2 ln(lambda_n).
struct EndToEndDecomposition {
  ComplexMatrix u_h;
  RealVector singular_values;
  ComplexMatrix v_h;
  RealVector rho;
};

/// Stable one-line description of a configuration, used to tag estimates
/// (e.g. normalization constants) with the channel family they belong to.
std::string describe(const PropagationConfig& config);

/// Draws K independent sections. U, V are Haar; g is N(0, sigma_k^2) per mode
/// (one shared draw per section when fully correlated); theta ~ U[0, 2pi)
/// when MDPS is on; tau, alpha ~ zero-mean Gaussian when GD / GVD are on.
FiberRealization sample_fiber(const PropagationConfig& config, Rng& rng);

ComplexMatrix section_response(const SectionParams& section, double omega);

/// H(w) = H^K(w) ... H^1(w).
ComplexMatrix response_at(const FiberRealization& fiber, double omega);

/// Draws H(0) directly with the same law as response_at(sample_fiber(config), 0).
///
/// Adjacent coupling matrices V^{k+1}* U^k multiply to a single Haar factor, so
/// the product needs K + 1 Haar factors instead of 2K, each applied in place by
/// apply_haar_left. Used by every Monte-Carlo estimator.
ComplexMatrix sample_channel(const PropagationConfig& config, Rng& rng);

/// Throws InvalidDimension for a non-square input.
EndToEndDecomposition decompose(const ComplexMatrix& h);

/// End-to-end MDL values 2 ln(lambda_n), descending.
RealVector end_to_end_mdl(const ComplexMatrix& h);

/// Pooled rho over `trials` literal realizations evaluated at `omega`.
std::vector<double> rho_population(const PropagationConfig& config, std::size_t trials,
                                   Rng& rng, double omega = 0.0);

/// Two-sample KS on pooled rho with MDPS on versus off (flat regime, w = 0),
/// `trials` realizations per arm. Throws InvalidInput when trials < 1000.
KsResult mdps_invariance_check(const PropagationConfig& config, std::size_t trials, Rng& rng,
                               double alpha = kDefaultSignificance);

/// Two-sample KS on pooled rho at omega_a versus omega_b over independent
/// realizations. Throws ConfigError when neither GD nor GVD is enabled,
/// InvalidInput when trials < 1000.
KsResult frequency_invariance_check(const PropagationConfig& config, double omega_a,
                                    double omega_b, std::size_t trials, Rng& rng,
                                    double alpha = kDefaultSignificance);

/// Largest relative spread (max - min) / mean of the n-th eigenvalue of
/// H(w)H(w)* across the given frequencies, maximized over n.
double eigenvalue_spread_across_frequencies(const FiberRealization& fiber,
                                            std::span<const double> omegas);

}  // namespace mmf
