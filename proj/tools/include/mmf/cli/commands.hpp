#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "mmf/cli/run_config.hpp"
#include "mmf/harness.hpp"
#include "mmf/stats.hpp"

namespace mmf::cli {

struct MdlDistReport {
  Histogram histogram;
  SemicircleFit fit;
  Moments moments;
};

struct ComparisonReport {
  std::vector<SweepResult> sweeps;
  /// Largest |offset| of random coupling from the n-mode baseline, dB.
  double random_vs_nmode_db = 0.0;
  /// Largest |controlled - ideal| / ideal over the grid.
  double controlled_vs_ideal_gap = 0.0;
};

struct FreqCheckReport {
  KsResult ks;
  bool fully_correlated = false;
  /// Largest relative eigenvalue spread across sub-carriers (fully correlated only).
  double max_spread = 0.0;
  struct Point {
    double snr_db = 0.0;
    double flat_mean = 0.0;
    double ofdm_mean = 0.0;
    double pooled_stderr = 0.0;
    bool agrees = false;
  };
  std::vector<Point> ofdm;
};

/// Sub-carrier frequencies w_i = 2 pi W ((i + 0.5) / N - 0.5).
std::vector<double> subcarrier_omegas(std::size_t count, double bandwidth_hz);

// Each command writes its CSV to config.output, or to `data` when no path is
// set, and its summary lines to `report`.
MdlDistReport cmd_mdl_dist(const RunConfig& config, std::ostream& data, std::ostream& report);
SweepResult cmd_capacity_sweep(const RunConfig& config, std::ostream& data, std::ostream& report);
ComparisonReport cmd_coupling_compare(const RunConfig& config, std::ostream& data,
                                      std::ostream& report);
FreqCheckReport cmd_freq_check(const RunConfig& config, std::ostream& report);

/// Full front end: parse, dispatch, report. Returns the process exit code and
/// prints a one-line diagnostic to `err` on failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mmf::cli
