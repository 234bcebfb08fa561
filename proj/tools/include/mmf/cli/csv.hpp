#pragma once

#include <string>
#include <vector>

#include "mmf/harness.hpp"

namespace mmf::cli {

/// Shortest decimal that round-trips to the same double.
std::string format_number(double value);

/// bin_left,bin_right,count,density
std::string histogram_csv(const Histogram& histogram);

/// snr_db,capacity_bps_hz,stderr,trials
std::string sweep_csv(const SweepResult& sweep);

/// snr_db,scenario,capacity_bps_hz,stderr, grouped by SNR in sweep order.
std::string comparison_csv(const std::vector<SweepResult>& sweeps);

/// Writes `contents` to `path`; throws IoError when the file cannot be written.
void write_file(const std::string& path, const std::string& contents);

}  // namespace mmf::cli
