#include "mmf/cli/csv.hpp"

#include <charconv>
#include <fstream>

#include "mmf/errors.hpp"

namespace mmf::cli {

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string histogram_csv(const Histogram& histogram) {
  std::string out = "bin_left,bin_right,count,density\n";
  for (std::size_t i = 0; i < histogram.bins(); ++i) {
    out += format_number(histogram.edges[i]) + ',' + format_number(histogram.edges[i + 1]) + ',' +
           std::to_string(histogram.counts[i]) + ',' + format_number(histogram.density(i)) + '\n';
  }
  return out;
}

std::string sweep_csv(const SweepResult& sweep) {
  std::string out = "snr_db,capacity_bps_hz,stderr,trials\n";
  for (const auto& p : sweep.per_snr) {
    out += format_number(p.snr_db) + ',' + format_number(p.capacity_mean) + ',' +
           format_number(p.std_error) + ',' + std::to_string(p.trials) + '\n';
  }
  return out;
}

std::string comparison_csv(const std::vector<SweepResult>& sweeps) {
  std::string out = "snr_db,scenario,capacity_bps_hz,stderr\n";
  if (sweeps.empty()) return out;
  for (std::size_t i = 0; i < sweeps.front().per_snr.size(); ++i) {
    for (const auto& s : sweeps) {
      const auto& p = s.per_snr.at(i);
      out += format_number(p.snr_db) + ',' + to_string(s.scenario.kind) + ',' +
             format_number(p.capacity_mean) + ',' + format_number(p.std_error) + '\n';
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path + "' for writing");
  file << contents;
  file.close();
  if (!file) throw IoError("failed writing '" + path + "'");
}

}  // namespace mmf::cli
