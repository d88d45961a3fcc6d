#include "prwf/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "prwf/errors.hpp"
#include "prwf/kernels.hpp"
#include "prwf/metrics.hpp"

namespace prwf {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::rwf: return "RWF";
    case Method::wf: return "WF";
    case Method::twf_lite: return "TWF-lite";
  }
  return "?";
}

Method parse_method(std::string_view s) {
  if (s == "RWF" || s == "rwf") return Method::rwf;
  if (s == "WF" || s == "wf") return Method::wf;
  if (s == "TWF-lite" || s == "twf-lite" || s == "TWF" || s == "twf") return Method::twf_lite;
  throw ParameterError("unknown method '" + std::string(s) + "'");
}

std::string_view to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::success: return "success";
    case StopReason::gradient_small: return "gradient_small";
    case StopReason::stagnation: return "stagnation";
    case StopReason::fixed_point: return "fixed_point";
    case StopReason::entered_region: return "entered_region";
    case StopReason::step_limit: return "step_limit";
    case StopReason::budget_exhausted: return "budget_exhausted";
    case StopReason::outer_limit: return "outer_limit";
  }
  return "?";
}

void SolverConfig::validate() const {
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta must lie in (0, 1)");
  if (max_outer < 1 || max_inner < 1) throw ParameterError("T and T1 must be at least 1");
  if (flat_iteration_budget < 1) throw ParameterError("iteration budget must be at least 1");
  if (!(success_nmse > 0.0)) throw ParameterError("success_nmse must be positive");
  if (!(eta > 0.0)) throw ParameterError("eta must be positive");
  if (max_halvings < 0) throw ParameterError("max_halvings must be non-negative");
  if (!(trunc_factor > 0.0)) throw ParameterError("trunc_factor must be positive");
  if (trunc_c && !(*trunc_c > 0.0)) throw ParameterError("trunc_C must be positive");
  if (fixed_mu < 0.0) throw ParameterError("fixed_mu must be non-negative");
}

double backtrack_stepsize(const std::function<double(double)>& f_along, double f0,
                          double grad_norm_sq, double beta, int max_halvings) {
  if (!(grad_norm_sq > 0.0)) throw ParameterError("backtracking needs a nonzero gradient");
  if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("beta must lie in (0, 1)");
  double tau = 1.0;
  for (int k = 0; k <= max_halvings; ++k) {
    if (f_along(tau) < f0 - tau * beta * grad_norm_sq) return tau;
    tau *= 0.5;
  }
  throw StagnationError("no Armijo step after " + std::to_string(max_halvings) + " halvings");
}

InnerResult inner_gd(const MeasurementEnsemble& e, const IntensityVector& y,
                     const WeightVector& w, const CVector& z_start, const SolverConfig& cfg,
                     const Signal* ground_truth, long max_steps, int outer_index,
                     long step_offset) {
  cfg.validate();
  if (z_start.size() != e.n()) throw ParameterError("start point length does not match n");
  if (y.size() != e.m() || w.size() != e.m())
    throw ParameterError("intensity or weight length does not match m");
  const long cap = max_steps < 0 ? cfg.max_inner : max_steps;
  const std::size_t m = e.m();
  const double inv_m = 1.0 / static_cast<double>(m);
  const double half_inv_m = 0.5 * inv_m;
  const double grad_tol = ground_truth ? 1e-12 : 1e-10 * static_cast<double>(m);
  const double mu = cfg.fixed_mu > 0.0 ? cfg.fixed_mu : 0.2 / static_cast<double>(e.n());
  const auto& k = kernels::active();

  InnerResult out;
  out.z = z_start;
  if (ground_truth && nmse(out.z, *ground_truth) < cfg.success_nmse) {
    out.stop = StopReason::success;
    return out;
  }

  // Real ensembles with a real iterate stay real: skip the imaginary planes.
  const bool real_path = e.field() == Field::real && z_start.is_real();
  CVector u = e.forward(out.z);
  CVector coeffs(m), grad(e.n()), grad_image(m);
  const double* y_ptr = y.values.data();
  const double* w_ptr = w.omegas.data();

  for (long t = 1; t <= cap; ++t) {
    const double f0 =
        half_inv_m * k.gradient_coeffs(u.re.data(), real_path ? nullptr : u.im.data(), y_ptr,
                                       w_ptr, m, inv_m, coeffs.re.data(), coeffs.im.data());
    e.adjoint(coeffs, grad);
    const double gn2 = norm_sq(grad);
    if (std::sqrt(gn2) <= grad_tol) {
      out.stop = StopReason::gradient_small;
      return out;
    }
    e.forward(grad, grad_image);
    const double* ui = real_path ? nullptr : u.im.data();
    const double* gi = real_path ? nullptr : grad_image.im.data();
    auto f_along = [&](double tau) {
      return half_inv_m * k.line_objective(u.re.data(), ui, grad_image.re.data(), gi, tau, y_ptr,
                                           w_ptr, m);
    };

    double tau = mu;
    double f_new = 0.0;
    if (cfg.stepsize == StepsizeMode::backtracking) {
      try {
        tau = backtrack_stepsize(f_along, f0, gn2, cfg.beta, cfg.max_halvings);
      } catch (const StagnationError&) {
        out.stop = StopReason::stagnation;
        return out;
      }
      if (cfg.record_trace) f_new = f_along(tau);
    } else if (cfg.record_trace) {
      f_new = f_along(tau);
    }

    for (std::size_t j = 0; j < e.n(); ++j) {
      out.z.re[j] -= tau * grad.re[j];
      out.z.im[j] -= tau * grad.im[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
      u.re[i] -= tau * grad_image.re[i];
      u.im[i] -= tau * grad_image.im[i];
    }
    ++out.steps;

    const double err = ground_truth ? nmse(out.z, *ground_truth)
                                    : std::numeric_limits<double>::quiet_NaN();
    if (cfg.record_trace)
      out.trace.push_back({outer_index, static_cast<int>(t), step_offset + t, f_new, err});
    if (ground_truth && err < cfg.success_nmse) {
      out.stop = StopReason::success;
      return out;
    }
    if (cfg.stop_in_region) {
      double worst = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        worst = std::max(worst, std::abs(u.re[i] * u.re[i] + u.im[i] * u.im[i] - y_ptr[i]));
      if (worst < kRegionEThreshold) {
        out.stop = StopReason::entered_region;
        return out;
      }
    }
  }
  out.stop = StopReason::step_limit;
  return out;
}

WeightVector outer_weights(const MeasurementEnsemble& e, const IntensityVector& y,
                           const CVector& z, const SolverConfig& cfg) {
  switch (cfg.method) {
    case Method::rwf:
      return compute_weights(e, y, z, cfg.eta);
    case Method::twf_lite: {
      double c = 0.0;
      if (cfg.trunc_c) {
        c = *cfg.trunc_c;
      } else {
        const std::vector<double> r = residuals(e, y, z);
        double mean_abs = 0.0;
        for (double v : r) mean_abs += std::abs(v);
        mean_abs /= static_cast<double>(r.size());
        if (mean_abs == 0.0) return unit_weights(e.m());
        c = cfg.trunc_factor * mean_abs;
      }
      return compute_truncation_weights(e, y, z, c);
    }
    case Method::wf:
      break;
  }
  return unit_weights(e.m());
}

SolverReport solve(const MeasurementEnsemble& e, const IntensityVector& y,
                   const SolverConfig& cfg, const SolveOptions& opts) {
  cfg.validate();
  const Signal* truth = opts.ground_truth;
  if (truth && truth->size() != e.n()) throw ParameterError("ground truth length does not match n");

  SolverReport report;
  CVector z;
  if (opts.start) {
    if (opts.start->size() != e.n()) throw ParameterError("start point length does not match n");
    z = *opts.start;
    report.init.z0 = z;
    report.init.lambda = norm(z);
    report.init.seed = opts.seed;
  } else {
    report.init = spectral_init(e, y, cfg.power, opts.seed);
    z = report.init.z0;
  }

  auto finish = [&](StopReason stop, bool converged) {
    report.stop = stop;
    report.converged = converged;
    report.final_nmse =
        truth ? nmse(z, *truth) : std::numeric_limits<double>::quiet_NaN();
    report.z_final = std::move(z);
    return report;
  };

  if (truth && nmse(z, *truth) < cfg.success_nmse) return finish(StopReason::success, true);

  auto absorb = [&](InnerResult& inner, int k) {
    report.total_grad_steps += inner.steps;
    report.outer_iters = k;
    if (cfg.record_trace)
      report.trace.insert(report.trace.end(), inner.trace.begin(), inner.trace.end());
  };

  if (cfg.method == Method::wf) {
    InnerResult inner = inner_gd(e, y, unit_weights(e.m()), z, cfg, truth,
                                 cfg.flat_iteration_budget, 1, 0);
    absorb(inner, 1);
    z = std::move(inner.z);
    switch (inner.stop) {
      case StopReason::success:
      case StopReason::entered_region:
        return finish(inner.stop, true);
      case StopReason::gradient_small:
        return finish(inner.stop, truth == nullptr);
      case StopReason::step_limit:
        return finish(StopReason::budget_exhausted, false);
      default:
        return finish(inner.stop, false);
    }
  }

  const long budget = cfg.method == Method::rwf
                          ? static_cast<long>(cfg.max_outer) * cfg.max_inner
                          : cfg.flat_iteration_budget;
  for (int k = 1;; ++k) {
    if (cfg.method == Method::rwf && k > cfg.max_outer) return finish(StopReason::outer_limit, false);
    const long remaining = budget - report.total_grad_steps;
    if (remaining <= 0) return finish(StopReason::budget_exhausted, false);

    const WeightVector w = outer_weights(e, y, z, cfg);
    InnerResult inner = inner_gd(e, y, w, z, cfg, truth,
                                 std::min<long>(cfg.max_inner, remaining), k,
                                 report.total_grad_steps);
    absorb(inner, k);
    const double moved = norm(difference(inner.z, z));
    z = std::move(inner.z);
    if (inner.stop == StopReason::success || inner.stop == StopReason::entered_region)
      return finish(inner.stop, true);
    if (inner.stop == StopReason::gradient_small && truth == nullptr)
      return finish(inner.stop, true);
    if (moved < 1e-14) return finish(StopReason::fixed_point, false);
  }
}

}  // namespace prwf
