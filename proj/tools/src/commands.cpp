#include "mmf/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <ostream>

#include "mmf/capacity.hpp"
#include "mmf/cli/csv.hpp"
#include "mmf/errors.hpp"
#include "mmf/rng.hpp"

namespace mmf::cli {
namespace {

constexpr std::uint64_t kNormalizationStream = 0x636c696e6f726dULL;
constexpr std::uint64_t kOfdmStream = 0x6f66646dULL << 32;

void emit(const RunConfig& config, const std::string& csv, std::ostream& data) {
  if (config.output.empty()) {
    data << csv;
  } else {
    write_file(config.output, csv);
  }
}

struct MeanAndError {
  double mean = 0.0;
  double std_error = 0.0;
};

MeanAndError mean_and_error(const std::vector<double>& v) {
  MeanAndError r;
  const double n = static_cast<double>(v.size());
  for (double x : v) r.mean += x;
  r.mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.std_error = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  return r;
}

}  // namespace

std::vector<double> subcarrier_omegas(std::size_t count, double bandwidth_hz) {
  std::vector<double> omegas(count);
  for (std::size_t i = 0; i < count; ++i) {
    omegas[i] = 2.0 * std::numbers::pi * bandwidth_hz *
                ((static_cast<double>(i) + 0.5) / static_cast<double>(count) - 0.5);
  }
  return omegas;
}

MdlDistReport cmd_mdl_dist(const RunConfig& config, std::ostream& data, std::ostream& report) {
  const std::size_t trials = config.trials_or(10000);
  const auto& p = config.propagation;
  if (trials * static_cast<std::size_t>(p.modes) < 10 * config.bins) {
    throw InvalidInput("mdl-dist needs trials * modes >= 10 * bins");
  }
  const auto samples = mdl_samples(p, trials, config.seed, config.workers);
  MdlDistReport r{make_histogram(samples, config.bins), {}, sample_moments(samples)};
  r.fit = semicircle_fit(r.histogram);
  emit(config, histogram_csv(r.histogram), data);
  report << "samples=" << samples.size() << " mean=" << format_number(r.moments.mean)
         << " std=" << format_number(r.moments.stddev)
         << " skewness=" << format_number(r.moments.skewness) << '\n'
         << "semicircle_r2=" << format_number(r.fit.r_squared)
         << " center=" << format_number(r.fit.center) << " radius=" << format_number(r.fit.radius)
         << '\n';
  return r;
}

SweepResult cmd_capacity_sweep(const RunConfig& config, std::ostream& data, std::ostream& report) {
  const Scenario scenario = config.make_scenario();
  const auto norm = estimate_scenario_normalization(
      scenario, config.norm_trials, derive_seed(config.seed, kNormalizationStream), config.workers);
  SweepResult result =
      ergodic_capacity(scenario, config.trials_or(2000), config.seed, norm, config.workers);
  emit(config, sweep_csv(result), data);
  report << "scenario=" << to_string(scenario.kind) << " streams=" << scenario.streams()
         << " normalization=" << format_number(norm.mean_eigenvalue)
         << " norm_trials=" << norm.trials_used << '\n';
  return result;
}

ComparisonReport cmd_coupling_compare(const RunConfig& config, std::ostream& data,
                                      std::ostream& report) {
  if (config.n_t != config.n_r) {
    throw UnsupportedConfiguration("coupling-compare requires --nt == --nr");
  }
  Figure4Options opt;
  opt.modes = config.propagation.modes;
  opt.streams = config.n_t;
  opt.sections = config.propagation.sections;
  opt.xi_db = config.propagation.xi_db;
  opt.mdl_correlation = config.propagation.mdl_correlation;
  opt.snr_grid = config.snr.points();
  opt.trials = config.trials_or(2000);
  opt.norm_trials = config.norm_trials;
  opt.master_seed = config.seed;
  opt.workers = config.workers;

  ComparisonReport r;
  r.sweeps = figure4_comparison(opt);
  emit(config, comparison_csv(r.sweeps), data);

  const auto& intrinsic = r.sweeps[0];
  const auto& controlled = r.sweeps[1];
  const auto& random = r.sweeps[2];
  const auto& nmode = r.sweeps[3];
  const auto& ideal = r.sweeps[4];
  if (opt.snr_grid.size() >= 2) {
    for (double o : horizontal_offset_db(nmode, random)) {
      r.random_vs_nmode_db = std::max(r.random_vs_nmode_db, std::abs(o));
    }
  }
  for (std::size_t i = 0; i < ideal.per_snr.size(); ++i) {
    const double c = controlled.per_snr[i].capacity_mean;
    const double id = ideal.per_snr[i].capacity_mean;
    r.controlled_vs_ideal_gap = std::max(r.controlled_vs_ideal_gap, std::abs(c - id) / id);
  }
  report << "random_vs_nmode_max_offset_db=" << format_number(r.random_vs_nmode_db) << '\n'
         << "controlled_vs_ideal_max_gap=" << format_number(r.controlled_vs_ideal_gap) << '\n';
  if (opt.snr_grid.size() >= 2) {
    const auto offsets = horizontal_offset_db(controlled, intrinsic);
    report << "intrinsic_advantage_db";
    for (std::size_t i = 0; i < offsets.size(); ++i) {
      report << ' ' << format_number(controlled.per_snr[i].snr_db) << ':'
             << format_number(-offsets[i]);
    }
    report << '\n';
  }
  return r;
}

FreqCheckReport cmd_freq_check(const RunConfig& config, std::ostream& report) {
  const auto& p = config.propagation;
  if (!p.include_gd && !p.include_gvd) {
    throw ConfigError("channel is flat: enable --gd-std or --gvd-std");
  }
  const std::size_t trials = config.trials_or(2000);
  const double omega_edge = 2.0 * std::numbers::pi * config.bandwidth_hz;

  FreqCheckReport r;
  Rng rng(config.seed);
  r.ks = frequency_invariance_check(p, 0.0, omega_edge, trials, rng);
  report << "ks_statistic=" << format_number(r.ks.statistic)
         << " critical=" << format_number(r.ks.critical_value) << " alpha=0.01 "
         << (r.ks.passed() ? "PASS" : "FAIL") << '\n';

  const auto omegas = subcarrier_omegas(config.subcarriers, config.bandwidth_hz);
  const auto grid = config.snr.points();
  const std::size_t streams = static_cast<std::size_t>(p.modes);
  r.fully_correlated = p.mdl_correlation == MdlCorrelation::fully_correlated;

  std::vector<std::vector<double>> flat(grid.size(), std::vector<double>(trials));
  std::vector<std::vector<double>> ofdm(grid.size(), std::vector<double>(trials));
  std::vector<double> spread(trials, 0.0);
  const std::uint64_t ofdm_seed = derive_seed(config.seed, kOfdmStream);
  parallel_for(trials, config.workers, [&](std::size_t t) {
    Rng trial_rng(derive_seed(ofdm_seed, t));
    const FiberRealization fiber = sample_fiber(p, trial_rng);
    const ComplexMatrix h0 = response_at(fiber, 0.0);
    std::vector<ComplexMatrix> responses;
    responses.reserve(omegas.size());
    for (double w : omegas) responses.push_back(response_at(fiber, w));
    for (std::size_t i = 0; i < grid.size(); ++i) {
      flat[i][t] = flat_capacity(h0, grid[i], streams);
      ofdm[i][t] = ofdm_capacity(responses, grid[i], streams);
    }
    if (r.fully_correlated) spread[t] = eigenvalue_spread_across_frequencies(fiber, omegas);
  });

  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto f = mean_and_error(flat[i]);
    const auto o = mean_and_error(ofdm[i]);
    const double pooled = std::hypot(f.std_error, o.std_error);
    const bool agrees = std::abs(f.mean - o.mean) <= 2.0 * pooled;
    r.ofdm.push_back({grid[i].snr_db, f.mean, o.mean, pooled, agrees});
    report << "snr_db=" << format_number(grid[i].snr_db) << " flat=" << format_number(f.mean)
           << " ofdm=" << format_number(o.mean) << " pooled_stderr=" << format_number(pooled) << ' '
           << (agrees ? "AGREE" : "DISAGREE") << '\n';
  }
  if (r.fully_correlated) {
    r.max_spread = *std::max_element(spread.begin(), spread.end());
    report << "fully_correlated max_relative_spread=" << format_number(r.max_spread) << ' '
           << (r.max_spread < 1e-10 ? "EXACT" : "NOT-EXACT") << '\n';
  }
  return r;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    std::string help;
    const ParsedCommand parsed = parse_command_line(argc, argv, help, std::getenv("MMF_LAB_SEED"));
    if (parsed.command.empty()) {
      out << help;
      return 0;
    }
    const RunConfig& cfg = parsed.config;
    std::ostream& report = cfg.output.empty() ? err : out;
    if (parsed.command == "mdl-dist") {
      cmd_mdl_dist(cfg, out, report);
    } else if (parsed.command == "capacity-sweep") {
      cmd_capacity_sweep(cfg, out, report);
    } else if (parsed.command == "coupling-compare") {
      cmd_coupling_compare(cfg, out, report);
    } else {
      cmd_freq_check(cfg, out);
    }
    return 0;
  } catch (const IoError& e) {
    err << "mmf-lab: I/O error: " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    err << "mmf-lab: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "mmf-lab: error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mmf::cli
