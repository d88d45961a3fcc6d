#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "prwf/bench/config.hpp"
#include "prwf/bench/csv.hpp"
#include "prwf/bench/ppm.hpp"
#include "prwf/metrics.hpp"

namespace prwf::bench {

struct ExperimentResult {
  CsvTable table;
  bool quota_failed = false;            // iters: some ratio missed its success quota
  std::vector<std::string> extra_files;  // image: PPM outputs written
};

/// Seed of trial `index` for `method` at ratio (or mask count) `point`.
std::uint64_t trial_seed(std::uint64_t base_seed, Method method, double point,
                         std::uint64_t index);
/// Seed of the planted instance shared by all methods at (point, index).
std::uint64_t instance_seed(std::uint64_t base_seed, std::uint64_t tag, double point,
                            std::uint64_t index);

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads. The first
/// exception thrown by any task is rethrown after all workers finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

/// One Gaussian-model trial: planted x, ensemble, exact intensities, solve.
TrialRecord run_gaussian_trial(std::size_t n, std::size_t m, Field field, Method method,
                               const SolverConfig& solver, std::uint64_t data_seed,
                               std::uint64_t solver_seed, bool time_it);
/// One CDP trial with a complex planted signal.
TrialRecord run_cdp_trial(std::size_t n, std::size_t masks, Method method,
                          const SolverConfig& solver, std::uint64_t data_seed,
                          std::uint64_t solver_seed, bool time_it);

ExperimentResult run_sweep(const ExperimentConfig& cfg, int jobs);
ExperimentResult run_trace(const ExperimentConfig& cfg, int jobs);
ExperimentResult run_iters(const ExperimentConfig& cfg, int jobs);
ExperimentResult run_cdp_sweep(const ExperimentConfig& cfg, int jobs);
ExperimentResult run_image(const ExperimentConfig& cfg, int jobs);
ExperimentResult run_landscape(const ExperimentConfig& cfg, int jobs);
ExperimentResult run_rc_probe(const ExperimentConfig& cfg, int jobs);

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs);

/// Per-channel recovery used by run_image; exposed for tests.
struct ChannelRecovery {
  std::vector<double> values;  // recovered samples on the original 0..255 scale, unclamped
  double nmse = 0.0;
  bool success = false;
  int outer_iters = 0;
  long grad_steps = 0;
};
ChannelRecovery recover_channel(const std::vector<std::uint8_t>& plane, std::size_t masks,
                                Method method, const SolverConfig& solver, std::uint64_t seed);

}  // namespace prwf::bench
