#include "mmf/cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "mmf/errors.hpp"

namespace mmf::cli {
namespace {

double parse_double(const std::string& text, const std::string& what) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError("invalid " + what + " '" + text + "'");
  }
  return value;
}

std::uint64_t parse_seed(const std::string& text) {
  std::uint64_t value = 0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc{} || res.ptr != end) {
    throw ConfigError("invalid seed '" + text + "'");
  }
  return value;
}

}  // namespace

SnrGrid parse_snr_grid(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.size() != 3) throw ConfigError("SNR grid must look like start:stop:step, got '" + text + "'");
  SnrGrid grid{parse_double(parts[0], "SNR start"), parse_double(parts[1], "SNR stop"),
               parse_double(parts[2], "SNR step")};
  grid.points();
  return grid;
}

Scenario RunConfig::make_scenario() const {
  Scenario s{scenario, propagation, n_t, n_r, snr.points()};
  s.validate();
  return s;
}

ParsedCommand parse_command_line(int argc, const char* const* argv, std::string& help,
                                 const char* env_seed) {
  RunConfig cfg;
  PropagationConfig& p = cfg.propagation;
  p.modes = 100;
  p.sections = 256;
  p.xi_db = 4.0;
  cfg.workers = std::max(1u, std::thread::hardware_concurrency());

  std::string snr_text = "0:30:2";
  std::string scenario_text = "intrinsic";
  std::string corr_text = "independent";
  std::string seed_text;
  std::size_t trials = 0;

  CLI::App app{"Monte-Carlo channel simulator for multi-mode fiber MIMO links", "mmf-lab"};
  app.set_config("--config", "", "key=value file; keys are long flag names");
  app.require_subcommand(1);
  app.add_option("--modes", p.modes, "Number of propagating modes M")->check(CLI::PositiveNumber);
  app.add_option("--sections", p.sections, "Number of fiber sections K")->check(CLI::PositiveNumber);
  app.add_option("--xi-db", p.xi_db, "Accumulated MDL standard deviation (dB)")->check(CLI::NonNegativeNumber);
  app.add_option("--nt", cfg.n_t, "Transmit streams")->check(CLI::PositiveNumber);
  app.add_option("--nr", cfg.n_r, "Receive streams")->check(CLI::PositiveNumber);
  app.add_option("--snr", snr_text, "SNR grid start:stop:step in dB");
  auto* trials_opt = app.add_option("--trials", trials, "Monte-Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--bins", cfg.bins, "Histogram bins")->check(CLI::PositiveNumber);
  app.add_option("--norm-trials", cfg.norm_trials, "Trials for the normalization estimate")
      ->check(CLI::Range(std::size_t{100}, std::numeric_limits<std::size_t>::max()));
  auto* seed_opt = app.add_option("--seed", seed_text, "Master seed (falls back to MMF_LAB_SEED)");
  app.add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--scenario", scenario_text, "intrinsic, controlled, random, nmode or ideal");
  app.add_option("--gd-std", p.gd_std, "Per-section group delay std (s); 0 disables")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--gvd-std", p.gvd_std, "Per-section GVD std (s^2); 0 disables")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--mdl-corr", corr_text, "independent or fully_correlated");
  app.add_option("--subcarriers", cfg.subcarriers, "OFDM sub-carriers")->check(CLI::PositiveNumber);
  app.add_option("--bandwidth", cfg.bandwidth_hz, "OFDM bandwidth (Hz)")->check(CLI::PositiveNumber);
  app.add_option("-o,--output", cfg.output, "Output CSV path (stdout when omitted)");

  for (const char* name : {"mdl-dist", "capacity-sweep", "coupling-compare", "freq-check"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.get_subcommand("mdl-dist")->description("Histogram of end-to-end MDL");
  app.get_subcommand("capacity-sweep")->description("Ergodic capacity over an SNR grid");
  app.get_subcommand("coupling-compare")->description("Coupling strategies against baselines");
  app.get_subcommand("freq-check")->description("Frequency invariance and OFDM capacity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    help = app.help();
    return {};
  } catch (const CLI::CallForAllHelp&) {
    help = app.help("", CLI::AppFormatMode::All);
    return {};
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  if (trials_opt->count() > 0) cfg.trials = trials;
  if (seed_opt->count() > 0) {
    cfg.seed = parse_seed(seed_text);
  } else if (env_seed != nullptr && *env_seed != '\0') {
    cfg.seed = parse_seed(env_seed);
  }
  cfg.snr = parse_snr_grid(snr_text);
  cfg.scenario = parse_scenario_kind(scenario_text);
  p.mdl_correlation = parse_mdl_correlation(corr_text);
  p.include_gd = p.gd_std > 0.0;
  p.include_gvd = p.gvd_std > 0.0;
  p.validate();

  ParsedCommand parsed;
  parsed.command = app.get_subcommands().front()->get_name();
  parsed.config = std::move(cfg);
  return parsed;
}

}  // namespace mmf::cli
