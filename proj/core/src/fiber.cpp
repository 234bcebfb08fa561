#include "mmf/fiber.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "mmf/errors.hpp"
#include "mmf/randmat.hpp"

namespace mmf {

double db_to_log_power(double db) { return db * std::numbers::ln10 / 10.0; }

double log_power_to_db(double log_power) { return log_power * 10.0 / std::numbers::ln10; }

std::string to_string(MdlCorrelation c) {
  return c == MdlCorrelation::independent ? "independent" : "fully_correlated";
}

MdlCorrelation parse_mdl_correlation(const std::string& text) {
  if (text == "independent") return MdlCorrelation::independent;
  if (text == "fully_correlated" || text == "full" || text == "correlated") {
    return MdlCorrelation::fully_correlated;
  }
  throw ConfigError("unknown MDL correlation '" + text + "'");
}

void PropagationConfig::validate() const {
  if (modes < 1) throw InvalidDimension("modes must be at least 1");
  if (sections < 1) throw InvalidDimension("sections must be at least 1");
  if (!std::isfinite(xi_db) || xi_db < 0.0) throw InvalidInput("xi_db must be finite and >= 0");
  if (!std::isfinite(gd_std) || gd_std < 0.0) throw InvalidInput("gd_std must be >= 0");
  if (!std::isfinite(gvd_std) || gvd_std < 0.0) throw InvalidInput("gvd_std must be >= 0");
  if (section_mdl_std.empty()) {
    return;
  }
  if (static_cast<Index>(section_mdl_std.size()) != sections) {
    throw InvalidDimension("section_mdl_std must have one entry per section");
  }
  double sum_sq = 0.0;
  for (double s : section_mdl_std) {
    if (!std::isfinite(s) || s < 0.0) throw InvalidInput("section MDL std must be >= 0");
    sum_sq += s * s;
  }
  const double xi2 = xi_log_power() * xi_log_power();
  if (std::abs(sum_sq - xi2) > 1e-9 * std::max(1.0, xi2)) {
    throw InvalidInput("per-section MDL variances must sum to xi^2");
  }
}

std::string describe(const PropagationConfig& config) {
  auto num = [](double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  std::string out = "M=" + std::to_string(config.modes) + " K=" + std::to_string(config.sections) +
                    " xi_db=" + num(config.xi_db) + " mdl=" + to_string(config.mdl_correlation);
  if (!config.section_mdl_std.empty()) {
    out += " sigma_k=";
    for (double s : config.section_mdl_std) out += num(s) + ",";
  }
  return out;
}

double PropagationConfig::xi_log_power() const { return db_to_log_power(xi_db); }

double PropagationConfig::section_sigma(Index k) const {
  if (!section_mdl_std.empty()) {
    return section_mdl_std.at(static_cast<std::size_t>(k));
  }
  return xi_log_power() / std::sqrt(static_cast<double>(sections));
}

namespace {

RealVector draw_mdl(const PropagationConfig& config, Index k, Rng& rng) {
  const double sigma = config.section_sigma(k);
  if (config.mdl_correlation == MdlCorrelation::fully_correlated) {
    return RealVector::Constant(config.modes, rng.normal(sigma));
  }
  RealVector g(config.modes);
  for (Index i = 0; i < config.modes; ++i) g(i) = rng.normal(sigma);
  return g;
}

RealVector draw_phases(const PropagationConfig& config, Rng& rng) {
  RealVector theta = RealVector::Zero(config.modes);
  if (config.include_mdps) {
    for (Index i = 0; i < config.modes; ++i) theta(i) = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }
  return theta;
}

RealVector draw_gaussian(Index n, bool enabled, double stddev, Rng& rng) {
  RealVector v = RealVector::Zero(n);
  if (enabled) {
    for (Index i = 0; i < n; ++i) v(i) = rng.normal(stddev);
  }
  return v;
}

ComplexVector propagation_diagonal(const SectionParams& s, double omega) {
  const Index m = s.g.size();
  ComplexVector d(m);
  for (Index i = 0; i < m; ++i) {
    const double phase = s.theta(i) + omega * s.tau(i) + omega * omega * s.alpha(i);
    d(i) = std::exp(0.5 * s.g(i)) * std::polar(1.0, -phase);
  }
  return d;
}

}  // namespace

FiberRealization sample_fiber(const PropagationConfig& config, Rng& rng) {
  config.validate();
  FiberRealization fiber{config, {}};
  fiber.sections.reserve(static_cast<std::size_t>(config.sections));
  for (Index k = 0; k < config.sections; ++k) {
    UnitaryMatrix u = haar_unitary(config.modes, rng);
    UnitaryMatrix v = haar_unitary(config.modes, rng);
    RealVector g = draw_mdl(config, k, rng);
    RealVector theta = draw_phases(config, rng);
    RealVector tau = draw_gaussian(config.modes, config.include_gd, config.gd_std, rng);
    RealVector alpha = draw_gaussian(config.modes, config.include_gvd, config.gvd_std, rng);
    fiber.sections.push_back(SectionParams{std::move(u), std::move(v), std::move(g),
                                           std::move(theta), std::move(tau), std::move(alpha)});
  }
  return fiber;
}

ComplexMatrix section_response(const SectionParams& section, double omega) {
  return section.u.matrix() * propagation_diagonal(section, omega).asDiagonal() *
         section.v.matrix().adjoint();
}

ComplexMatrix response_at(const FiberRealization& fiber, double omega) {
  const Index m = fiber.modes();
  ComplexMatrix h = ComplexMatrix::Identity(m, m);
  ComplexMatrix tmp(m, m);
  for (const auto& section : fiber.sections) {
    tmp.noalias() = section.v.matrix().adjoint() * h;
    tmp = propagation_diagonal(section, omega).asDiagonal() * tmp;
    h.noalias() = section.u.matrix() * tmp;
  }
  return h;
}

ComplexMatrix sample_channel(const PropagationConfig& config, Rng& rng) {
  config.validate();
  const Index m = config.modes;
  ComplexMatrix h = ComplexMatrix::Identity(m, m);
  apply_haar_left(h, rng);
  ComplexVector d(m);
  for (Index k = 0; k < config.sections; ++k) {
    const RealVector g = draw_mdl(config, k, rng);
    const RealVector theta = draw_phases(config, rng);
    for (Index i = 0; i < m; ++i) {
      d(i) = std::exp(0.5 * g(i)) * std::polar(1.0, -theta(i));
    }
    h = d.asDiagonal() * h;
    apply_haar_left(h, rng);
  }
  return h;
}

EndToEndDecomposition decompose(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) {
    throw InvalidDimension("decompose: channel matrix must be square");
  }
  Eigen::BDCSVD<ComplexMatrix> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  EndToEndDecomposition out;
  out.u_h = svd.matrixU();
  out.singular_values = svd.singularValues();
  out.v_h = svd.matrixV();
  out.rho = out.singular_values.array().log().matrix() * 2.0;
  return out;
}

RealVector end_to_end_mdl(const ComplexMatrix& h) {
  return singular_values(h).array().log().matrix() * 2.0;
}

std::vector<double> rho_population(const PropagationConfig& config, std::size_t trials,
                                   Rng& rng, double omega) {
  std::vector<double> pooled;
  pooled.reserve(trials * static_cast<std::size_t>(config.modes));
  for (std::size_t t = 0; t < trials; ++t) {
    const RealVector rho = end_to_end_mdl(response_at(sample_fiber(config, rng), omega));
    pooled.insert(pooled.end(), rho.begin(), rho.end());
  }
  return pooled;
}

KsResult mdps_invariance_check(const PropagationConfig& config, std::size_t trials, Rng& rng,
                               double alpha) {
  if (trials < 1000) {
    throw InvalidInput("mdps_invariance_check needs at least 1000 trials per arm");
  }
  PropagationConfig with_phase = config;
  with_phase.include_mdps = true;
  PropagationConfig without_phase = config;
  without_phase.include_mdps = false;
  Rng rng_a(rng.next_u64());
  Rng rng_b(rng.next_u64());
  return ks_two_sample(rho_population(with_phase, trials, rng_a),
                       rho_population(without_phase, trials, rng_b), alpha);
}

KsResult frequency_invariance_check(const PropagationConfig& config, double omega_a,
                                    double omega_b, std::size_t trials, Rng& rng, double alpha) {
  if (!config.include_gd && !config.include_gvd) {
    throw ConfigError("channel is flat: enable group delay or GVD");
  }
  if (trials < 1000) {
    throw InvalidInput("frequency_invariance_check needs at least 1000 trials per arm");
  }
  Rng rng_a(rng.next_u64());
  Rng rng_b(rng.next_u64());
  return ks_two_sample(rho_population(config, trials, rng_a, omega_a),
                       rho_population(config, trials, rng_b, omega_b), alpha);
}

double eigenvalue_spread_across_frequencies(const FiberRealization& fiber,
                                            std::span<const double> omegas) {
  if (omegas.empty()) {
    throw InvalidInput("need at least one frequency");
  }
  const Index m = fiber.modes();
  RealVector lo = RealVector::Constant(m, std::numeric_limits<double>::infinity());
  RealVector hi = RealVector::Constant(m, -std::numeric_limits<double>::infinity());
  RealVector sum = RealVector::Zero(m);
  for (double w : omegas) {
    const RealVector eig = channel_eigenvalues(response_at(fiber, w));
    lo = lo.cwiseMin(eig);
    hi = hi.cwiseMax(eig);
    sum += eig;
  }
  const RealVector mean = sum / static_cast<double>(omegas.size());
  return ((hi - lo).array() / mean.array()).maxCoeff();
}

}  // namespace mmf
