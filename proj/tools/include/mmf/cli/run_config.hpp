#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmf/capacity.hpp"
#include "mmf/fiber.hpp"
#include "mmf/harness.hpp"

namespace mmf::cli {

struct SnrGrid {
  double start_db = 0.0;
  double stop_db = 30.0;
  double step_db = 2.0;

  std::vector<SnrSpec> points() const { return snr_range(start_db, stop_db, step_db); }
};

/// Parses "start:stop:step" in dB. Throws ConfigError.
SnrGrid parse_snr_grid(const std::string& text);

struct RunConfig {
  PropagationConfig propagation;
  ScenarioKind scenario = ScenarioKind::intrinsic_all_modes;
  Index n_t = 4;
  Index n_r = 4;
  SnrGrid snr;
  /// Unset means the per-command default (10^4 for mdl-dist, 2000 otherwise).
  std::optional<std::size_t> trials;
  std::size_t bins = 60;
  std::size_t norm_trials = 10000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  std::string output;
  std::size_t subcarriers = 16;
  double bandwidth_hz = 10e9;

  std::size_t trials_or(std::size_t fallback) const { return trials.value_or(fallback); }
  Scenario make_scenario() const;
};

struct ParsedCommand {
  std::string command;
  RunConfig config;
};

/// Parses argv. `--config FILE` reads key=value lines whose keys are the long
/// flag names; flags given on the command line win. When --seed is absent the
/// MMF_LAB_SEED value (if any) is used. Throws ConfigError on bad input.
/// Returns an empty command when --help was handled (help text goes to `help`).
ParsedCommand parse_command_line(int argc, const char* const* argv, std::string& help,
                                 const char* env_seed = nullptr);

}  // namespace mmf::cli
