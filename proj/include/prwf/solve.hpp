#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "prwf/init.hpp"
#include "prwf/measurement.hpp"
#include "prwf/objective.hpp"
#include "prwf/vector.hpp"

namespace prwf {

enum class Method { rwf, wf, twf_lite };
enum class StepsizeMode { backtracking, fixed };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view s);

enum class StopReason {
  success,           // NMSE against ground truth fell below success_nmse
  gradient_small,    // ||grad f|| under the inner tolerance
  stagnation,        // line search exhausted max_halvings
  fixed_point,       // successive outer iterates closer than 1e-14
  entered_region,    // iterate reached E(z) with stop_in_region set
  step_limit,        // inner run used its T1 steps
  budget_exhausted,  // total gradient-step budget spent
  outer_limit,       // T outer iterations completed
};

std::string_view to_string(StopReason r) noexcept;

struct SolverConfig {
  Method method = Method::rwf;
  int max_outer = 300;               // T
  int max_inner = 500;               // T1
  long flat_iteration_budget = 150000;
  double beta = 0.1;
  double eta = kDefaultEta;
  // TWF-lite threshold: trunc_c if set, else trunc_factor * mean |r_i|.
  std::optional<double> trunc_c;
  double trunc_factor = 5.0;
  StepsizeMode stepsize = StepsizeMode::backtracking;
  double fixed_mu = 0.0;             // 0 selects 0.2 / n
  double success_nmse = 1e-5;
  int max_halvings = 60;
  PowerMethodOptions power;
  bool record_trace = false;
  bool stop_in_region = false;

  /// Throws ParameterError when an invariant is violated.
  void validate() const;
};

struct TraceEntry {
  int outer = 0;      // k, 1-based
  int inner = 0;      // t within the outer iteration, 1-based
  long step = 0;      // cumulative gradient steps
  double objective = 0.0;
  double nmse = 0.0;  // NaN without ground truth
};

struct InnerResult {
  CVector z;
  long steps = 0;
  StopReason stop = StopReason::step_limit;
  std::vector<TraceEntry> trace;
};

struct SolverReport {
  CVector z_final;
  int outer_iters = 0;
  long total_grad_steps = 0;
  std::vector<TraceEntry> trace;
  InitReport init;
  bool converged = false;
  StopReason stop = StopReason::step_limit;
  double final_nmse = 0.0;  // NaN without ground truth
};

/// Armijo backtracking: returns tau = 2^-k for the smallest k >= 0 with
///   f_along(tau) < f0 - tau * beta * grad_norm_sq,
/// where f_along(tau) = f(z - tau * grad). Throws StagnationError after
/// max_halvings halvings and ParameterError for a zero gradient.
double backtrack_stepsize(const std::function<double(double)>& f_along, double f0,
                          double grad_norm_sq, double beta, int max_halvings);

/// Gradient descent on the objective with frozen weights, at most
/// `max_steps` steps (cfg.max_inner when negative).
InnerResult inner_gd(const MeasurementEnsemble& e, const IntensityVector& y,
                     const WeightVector& w, const CVector& z_start, const SolverConfig& cfg,
                     const Signal* ground_truth = nullptr, long max_steps = -1,
                     int outer_index = 1, long step_offset = 0);

/// Weights of one outer iteration for cfg.method, computed at z: reweighted
/// for RWF, truncation for TWF-lite, unit for WF.
WeightVector outer_weights(const MeasurementEnsemble& e, const IntensityVector& y,
                           const CVector& z, const SolverConfig& cfg);

struct SolveOptions {
  const Signal* ground_truth = nullptr;
  std::uint64_t seed = 0;
  /// Skips spectral initialization and starts from this point.
  std::optional<CVector> start;
};

SolverReport solve(const MeasurementEnsemble& e, const IntensityVector& y,
                   const SolverConfig& cfg, const SolveOptions& opts);

}  // namespace prwf
