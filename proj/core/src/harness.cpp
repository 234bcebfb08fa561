#include "mmf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

#include "mmf/coupling.hpp"
#include "mmf/errors.hpp"
#include "mmf/randmat.hpp"
#include "mmf/rng.hpp"

namespace mmf {
namespace {

constexpr std::uint64_t kNormalizationStream = 0x6e6f726d00000000ULL;
constexpr std::uint64_t kBaselineStream = 0x626173650000000ULL;

bool shares_fiber(ScenarioKind kind) {
  return kind == ScenarioKind::intrinsic_all_modes || kind == ScenarioKind::controlled ||
         kind == ScenarioKind::random_coupling;
}

bool needs_channel(const Scenario& s) {
  if (s.kind == ScenarioKind::random_coupling) return true;
  return !s.deterministic();
}

RealVector coupled_eigenvalues(const Scenario& s, const ComplexMatrix& h, Rng& rng) {
  switch (s.kind) {
    case ScenarioKind::intrinsic_all_modes:
      if (s.deterministic()) return RealVector::Ones(s.config.modes);
      return channel_eigenvalues(h);
    case ScenarioKind::controlled: {
      if (s.deterministic()) return RealVector::Ones(s.n_t);
      const CouplingPair pair = controlled_pair(decompose(h), s.n_t, s.n_r);
      return channel_eigenvalues(couple(h, pair, CouplingScenario::controlled).h_t);
    }
    case ScenarioKind::random_coupling: {
      const CouplingPair pair = random_pair(s.config.modes, s.n_t, s.n_r, rng);
      return channel_eigenvalues(couple(h, pair, CouplingScenario::random).h_t);
    }
    default:
      break;
  }
  throw InvalidInput("scenario does not share the configured fiber");
}

double stable_mean(std::span<const double> x) {
  const double x0 = x.front();
  double acc = 0.0;
  for (double v : x) acc += v - x0;
  return x0 + acc / static_cast<double>(x.size());
}

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::intrinsic_all_modes: return "intrinsic";
    case ScenarioKind::controlled: return "controlled";
    case ScenarioKind::random_coupling: return "random";
    case ScenarioKind::nmode_baseline: return "nmode";
    case ScenarioKind::ideal_fiber: return "ideal";
  }
  return "unknown";
}

ScenarioKind parse_scenario_kind(const std::string& text) {
  if (text == "intrinsic" || text == "intrinsic_all_modes") return ScenarioKind::intrinsic_all_modes;
  if (text == "controlled") return ScenarioKind::controlled;
  if (text == "random" || text == "random_coupling") return ScenarioKind::random_coupling;
  if (text == "nmode" || text == "nmode_baseline") return ScenarioKind::nmode_baseline;
  if (text == "ideal" || text == "ideal_fiber") return ScenarioKind::ideal_fiber;
  throw ConfigError("unknown scenario '" + text + "'");
}

void Scenario::validate() const {
  config.validate();
  if (snr_grid.empty()) throw InvalidInput("scenario needs a non-empty SNR grid");
  if (kind == ScenarioKind::intrinsic_all_modes) return;
  if (n_t < 1 || n_r < 1) throw InvalidDimension("stream counts must be positive");
  if (kind != ScenarioKind::random_coupling && n_t != n_r) {
    throw UnsupportedConfiguration(to_string(kind) + " scenario requires n_t == n_r");
  }
  if (kind != ScenarioKind::nmode_baseline && kind != ScenarioKind::ideal_fiber &&
      (n_t > config.modes || n_r > config.modes)) {
    throw InvalidDimension("stream counts cannot exceed the mode count");
  }
}

std::size_t Scenario::streams() const {
  return static_cast<std::size_t>(kind == ScenarioKind::intrinsic_all_modes ? config.modes : n_t);
}

PropagationConfig Scenario::effective_config() const {
  PropagationConfig eff = config;
  if (kind == ScenarioKind::nmode_baseline) {
    eff.modes = n_t;
  } else if (kind == ScenarioKind::ideal_fiber) {
    eff.modes = n_t;
    eff.sections = 1;
    eff.xi_db = 0.0;
    eff.section_mdl_std.clear();
  }
  return eff;
}

bool Scenario::deterministic() const {
  switch (kind) {
    case ScenarioKind::ideal_fiber: return true;
    case ScenarioKind::random_coupling: return false;
    default: return effective_config().lossless();
  }
}

std::string normalization_scope(const Scenario& scenario) {
  if (scenario.kind == ScenarioKind::intrinsic_all_modes) {
    return "intrinsic " + describe(scenario.config);
  }
  return to_string(scenario.kind) + " nt=" + std::to_string(scenario.n_t) +
         " nr=" + std::to_string(scenario.n_r) + " " + describe(scenario.effective_config());
}

std::vector<SnrSpec> snr_range(double start_db, double stop_db, double step_db) {
  if (!(step_db > 0.0) || !(start_db <= stop_db)) {
    throw ConfigError("SNR grid needs start <= stop and step > 0");
  }
  std::vector<SnrSpec> grid;
  const double slack = 1e-9 * std::max(1.0, std::abs(stop_db));
  for (std::size_t i = 0;; ++i) {
    const double s = start_db + static_cast<double>(i) * step_db;
    if (s > stop_db + slack) break;
    grid.push_back({s});
  }
  return grid;
}

double Histogram::density(std::size_t i) const {
  if (total == 0) return 0.0;
  return static_cast<double>(counts[i]) / (static_cast<double>(total) * width(i));
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min(workers, n);
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

RealVector trial_eigenvalues(const Scenario& scenario, Rng& rng) {
  switch (scenario.kind) {
    case ScenarioKind::ideal_fiber:
      return RealVector::Ones(scenario.n_t);
    case ScenarioKind::nmode_baseline: {
      if (scenario.deterministic()) return RealVector::Ones(scenario.n_t);
      const ComplexMatrix h = sample_channel(scenario.effective_config(), rng);
      const UnitaryMatrix in = haar_unitary(scenario.n_t, rng);
      const UnitaryMatrix out = haar_unitary(scenario.n_r, rng);
      const CouplingPair pair(in.matrix(), out.matrix());
      return channel_eigenvalues(couple(h, pair, CouplingScenario::nmode_baseline).h_t);
    }
    default: {
      ComplexMatrix h;
      if (needs_channel(scenario)) h = sample_channel(scenario.config, rng);
      return coupled_eigenvalues(scenario, h, rng);
    }
  }
}

std::vector<std::vector<RealVector>> shared_trial_eigenvalues(std::span<const Scenario> group,
                                                              std::size_t trials,
                                                              std::uint64_t seed,
                                                              std::size_t workers) {
  if (group.empty()) throw InvalidInput("empty scenario group");
  bool sample = false;
  for (const auto& s : group) {
    s.validate();
    if (!shares_fiber(s.kind) || !(s.config == group.front().config)) {
      throw InvalidInput("scenarios in a shared group must use the same fiber");
    }
    sample = sample || needs_channel(s);
  }
  std::vector<std::vector<RealVector>> out(trials, std::vector<RealVector>(group.size()));
  parallel_for(trials, workers, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    ComplexMatrix h;
    if (sample) h = sample_channel(group.front().config, rng);
    for (std::size_t i = 0; i < group.size(); ++i) out[t][i] = coupled_eigenvalues(group[i], h, rng);
  });
  return out;
}

NormalizationConstant normalization_from_samples(const Scenario& scenario,
                                                 std::span<const RealVector> eigenvalues,
                                                 NormalizationMode mode) {
  if (eigenvalues.empty()) throw InvalidInput("normalization needs at least one trial");
  NormalizationConstant norm;
  norm.scope = normalization_scope(scenario);
  norm.mode = mode;
  norm.trials_used = eigenvalues.size();
  RealVector sum = RealVector::Zero(eigenvalues.front().size());
  for (const auto& e : eigenvalues) {
    if (e.size() != sum.size()) throw InvalidDimension("eigenvalue vectors differ in length");
    sum += e;
  }
  norm.per_index_mean = sum / static_cast<double>(eigenvalues.size());
  norm.mean_eigenvalue = norm.per_index_mean.mean();
  return norm;
}

NormalizationConstant estimate_scenario_normalization(const Scenario& scenario, std::size_t trials,
                                                      std::uint64_t seed, std::size_t workers,
                                                      NormalizationMode mode) {
  if (trials < 100) throw InvalidInput("normalization needs at least 100 trials");
  scenario.validate();
  if (scenario.deterministic()) {
    NormalizationConstant norm;
    norm.scope = normalization_scope(scenario);
    norm.mode = mode;
    norm.trials_used = trials;
    norm.per_index_mean = RealVector::Ones(static_cast<Index>(scenario.kind == ScenarioKind::intrinsic_all_modes
                                                                  ? scenario.config.modes
                                                                  : scenario.n_t));
    return norm;
  }
  std::vector<RealVector> samples(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    samples[t] = trial_eigenvalues(scenario, rng);
  });
  return normalization_from_samples(scenario, samples, mode);
}

SweepResult summarize(const Scenario& scenario, std::span<const RealVector> eigenvalues,
                      const NormalizationConstant& norm) {
  if (eigenvalues.empty()) throw InvalidInput("summarize needs at least one trial");
  if (norm.scope != normalization_scope(scenario)) {
    throw ConfigurationMismatch("normalization estimated for '" + norm.scope +
                                "' applied to '" + normalization_scope(scenario) + "'");
  }
  SweepResult result{scenario, {}};
  const std::size_t n = eigenvalues.size();
  std::vector<double> values(n);
  for (const SnrSpec& snr : scenario.snr_grid) {
    for (std::size_t t = 0; t < n; ++t) {
      values[t] = normalized_capacity(eigenvalues[t], norm, snr, scenario.streams());
    }
    const double mean = stable_mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double std_error =
        n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
    result.per_snr.push_back({snr.snr_db, mean, std_error, n});
  }
  return result;
}

SweepResult ergodic_capacity(const Scenario& scenario, std::size_t trials, std::uint64_t master_seed,
                             const NormalizationConstant& norm, std::size_t workers) {
  if (trials == 0) throw InvalidInput("ergodic_capacity needs at least one trial");
  scenario.validate();
  if (norm.scope != normalization_scope(scenario)) {
    throw ConfigurationMismatch("normalization estimated for '" + norm.scope +
                                "' applied to '" + normalization_scope(scenario) + "'");
  }
  std::vector<RealVector> samples(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    Rng rng(derive_seed(master_seed, t));
    samples[t] = trial_eigenvalues(scenario, rng);
  });
  return summarize(scenario, samples, norm);
}

std::vector<double> mdl_samples(const PropagationConfig& config, std::size_t trials,
                                std::uint64_t master_seed, std::size_t workers) {
  config.validate();
  const auto m = static_cast<std::size_t>(config.modes);
  std::vector<double> out(trials * m, 0.0);
  if (config.lossless()) return out;
  parallel_for(trials, workers, [&](std::size_t t) {
    Rng rng(derive_seed(master_seed, t));
    const RealVector rho = end_to_end_mdl(sample_channel(config, rng));
    std::copy(rho.data(), rho.data() + m, out.begin() + static_cast<std::ptrdiff_t>(t * m));
  });
  return out;
}

Histogram make_histogram(std::span<const double> samples, std::size_t bins) {
  if (samples.empty()) throw InvalidInput("histogram of an empty sample");
  if (bins == 0) throw InvalidInput("histogram needs at least one bin");
  const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  double lo = *lo_it;
  double hi = *hi_it;
  if (!(hi > lo)) {
    const double w = 1.0 / static_cast<double>(bins);
    lo = *lo_it - (static_cast<double>(bins / 2) + 0.5) * w;
    hi = lo + 1.0;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  const double w = (hi - lo) / static_cast<double>(bins);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + static_cast<double>(i) * w;
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double x : samples) {
    auto idx = static_cast<std::size_t>(std::floor((x - lo) / w));
    idx = std::min(idx, bins - 1);
    ++h.counts[idx];
  }
  h.total = samples.size();
  return h;
}

Histogram mdl_histogram(const PropagationConfig& config, std::size_t trials, std::size_t bins,
                        std::uint64_t master_seed, std::size_t workers) {
  if (trials * static_cast<std::size_t>(config.modes) < 10 * bins) {
    throw InvalidInput("mdl_histogram needs trials * M >= 10 * bins");
  }
  const auto samples = mdl_samples(config, trials, master_seed, workers);
  return make_histogram(samples, bins);
}

SemicircleFit semicircle_fit(const Histogram& histogram) {
  const std::size_t n = histogram.bins();
  if (n == 0 || histogram.total == 0) throw InvalidInput("semicircle_fit on an empty histogram");
  std::vector<double> x(n);
  std::vector<double> y(n);
  double mass = 0.0;
  double first = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = histogram.center(i);
    y[i] = histogram.density(i);
    mass += y[i] * histogram.width(i);
    first += x[i] * y[i] * histogram.width(i);
  }
  const double mean = first / mass;
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) var += (x[i] - mean) * (x[i] - mean) * y[i] * histogram.width(i);
  double spread = std::sqrt(var / mass);
  if (!(spread > 0.0)) spread = histogram.width(0);

  auto sse = [&](double c, double r) {
    const double scale = 2.0 / (std::numbers::pi * r * r);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = r * r - (x[i] - c) * (x[i] - c);
      const double f = d > 0.0 ? scale * std::sqrt(d) : 0.0;
      total += (y[i] - f) * (y[i] - f);
    }
    return total;
  };

  // Zooming grid search: robust to the kink at the support edge.
  constexpr int kGrid = 25;
  double c_best = mean;
  double r_best = 2.0 * spread;
  double c_span = spread;
  double r_span = 1.5 * spread;
  double best = sse(c_best, r_best);
  for (int round = 0; round < 14; ++round) {
    const double c0 = c_best;
    const double r0 = r_best;
    for (int i = 0; i < kGrid; ++i) {
      const double c = c0 + c_span * (2.0 * i / (kGrid - 1) - 1.0);
      for (int j = 0; j < kGrid; ++j) {
        const double r = r0 + r_span * (2.0 * j / (kGrid - 1) - 1.0);
        if (!(r > 0.0)) continue;
        const double e = sse(c, r);
        if (e < best) {
          best = e;
          c_best = c;
          r_best = r;
        }
      }
    }
    c_span *= 0.3;
    r_span *= 0.3;
  }

  const double y_mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(n);
  double sst = 0.0;
  for (double v : y) sst += (v - y_mean) * (v - y_mean);
  const double r2 = sst > 0.0 ? 1.0 - best / sst : (best == 0.0 ? 1.0 : 0.0);
  return {c_best, r_best, r2};
}

std::vector<double> horizontal_offset_db(const SweepResult& reference, const SweepResult& other) {
  const auto& pts = other.per_snr;
  if (pts.size() < 2) throw InvalidInput("horizontal offset needs at least two points on a curve");
  std::vector<double> offsets;
  offsets.reserve(reference.per_snr.size());
  for (const auto& ref : reference.per_snr) {
    const double target = ref.capacity_mean;
    std::size_t seg = 0;
    while (seg + 2 < pts.size() && pts[seg + 1].capacity_mean < target) ++seg;
    const auto& a = pts[seg];
    const auto& b = pts[seg + 1];
    const double slope = (b.capacity_mean - a.capacity_mean) / (b.snr_db - a.snr_db);
    if (!(slope > 0.0)) throw InvalidInput("capacity curve is not increasing");
    offsets.push_back(a.snr_db + (target - a.capacity_mean) / slope - ref.snr_db);
  }
  return offsets;
}

std::vector<SweepResult> figure4_comparison(const Figure4Options& options) {
  PropagationConfig fiber;
  fiber.modes = options.modes;
  fiber.sections = options.sections;
  fiber.xi_db = options.xi_db;
  fiber.mdl_correlation = options.mdl_correlation;

  auto make = [&](ScenarioKind kind) {
    return Scenario{kind, fiber, options.streams, options.streams, options.snr_grid};
  };
  const std::vector<Scenario> group{make(ScenarioKind::intrinsic_all_modes),
                                    make(ScenarioKind::controlled),
                                    make(ScenarioKind::random_coupling)};
  const Scenario nmode = make(ScenarioKind::nmode_baseline);
  const Scenario ideal = make(ScenarioKind::ideal_fiber);
  if (options.norm_trials < 100) throw InvalidInput("normalization needs at least 100 trials");

  const auto norm_runs = shared_trial_eigenvalues(
      group, options.norm_trials, derive_seed(options.master_seed, kNormalizationStream), options.workers);
  const auto runs = shared_trial_eigenvalues(group, options.trials, options.master_seed, options.workers);

  std::vector<SweepResult> out;
  std::vector<RealVector> column(options.norm_trials);
  std::vector<RealVector> trial_column(options.trials);
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t t = 0; t < options.norm_trials; ++t) column[t] = norm_runs[t][i];
    for (std::size_t t = 0; t < options.trials; ++t) trial_column[t] = runs[t][i];
    NormalizationConstant norm;
    if (group[i].deterministic()) {
      norm = estimate_scenario_normalization(group[i], options.norm_trials, 0, 1, options.normalization);
    } else {
      norm = normalization_from_samples(group[i], column, options.normalization);
    }
    out.push_back(summarize(group[i], trial_column, norm));
  }

  const std::uint64_t baseline_seed = derive_seed(options.master_seed, kBaselineStream);
  const auto nmode_norm =
      estimate_scenario_normalization(nmode, options.norm_trials,
                                      derive_seed(baseline_seed, kNormalizationStream), options.workers,
                                      options.normalization);
  out.push_back(ergodic_capacity(nmode, options.trials, baseline_seed, nmode_norm, options.workers));
  const auto ideal_norm =
      estimate_scenario_normalization(ideal, options.norm_trials, 0, 1, options.normalization);
  out.push_back(ergodic_capacity(ideal, options.trials, baseline_seed, ideal_norm, options.workers));
  return out;
}

}  // namespace mmf
