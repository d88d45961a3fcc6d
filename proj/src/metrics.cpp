#include "prwf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "prwf/errors.hpp"
#include "prwf/objective.hpp"

namespace prwf {

std::complex<double> best_phase(const CVector& z, const CVector& x, Field field) {
  if (z.size() != x.size()) throw ParameterError("dist: length mismatch");
  const std::complex<double> c = inner(x, z);
  if (field == Field::real) return c.real() >= 0.0 ? 1.0 : -1.0;
  const double mag = std::abs(c);
  return mag == 0.0 ? std::complex<double>(1.0) : c / mag;
}

double dist(const CVector& z, const CVector& x, Field field) {
  const std::complex<double> phase = best_phase(z, x, field);
  // Evaluated as ||z - x e^{j phi*}|| rather than through
  // ||z||^2 + ||x||^2 - 2|x* z|, which cancels catastrophically near zero.
  CVector diff = z;
  axpy(-phase, x, diff);
  return norm(diff);
}

double nmse(const CVector& z, const CVector& x, Field field) {
  const double nx = norm(x);
  if (nx == 0.0) throw DegenerateInputError("nmse: ground truth is the zero vector");
  return dist(z, x, field) / nx;
}

double max_abs_residual(const MeasurementEnsemble& e, const IntensityVector& y,
                        const CVector& z) {
  const std::vector<double> r = residuals(e, y, z);
  double worst = 0.0;
  for (double v : r) worst = std::max(worst, std::abs(v));
  return worst;
}

bool in_region_E(const MeasurementEnsemble& e, const IntensityVector& y, const CVector& z) {
  return max_abs_residual(e, y, z) < kRegionEThreshold;
}

RCReport rc_probe(const MeasurementEnsemble& e, const IntensityVector& y, const Signal& x,
                  const CVector& z, const RCOptions& opts) {
  if (x.size() != e.n() || z.size() != e.n()) throw ParameterError("rc_probe: length mismatch");
  RCReport rep;
  rep.z_probe = z;
  rep.alpha = opts.alpha;
  rep.beta_rc = opts.beta_rc > 0.0 ? opts.beta_rc : 700.0 + 4.0 * static_cast<double>(e.n());
  rep.delta = opts.delta;

  const std::complex<double> phase = best_phase(z, x.values, x.field);
  rep.h = scaled(z, std::conj(phase));
  axpy(-1.0, x.values, rep.h);
  CVector toward = z;  // z - x e^{j phi}
  axpy(-phase, x.values, toward);

  const WeightVector w = compute_weights(e, y, z, opts.eta);
  const CVector g = wirtinger_gradient(e, y, w, z);
  rep.lhs_curvature = inner(g, toward).real();
  rep.dist_sq = norm_sq(rep.h);
  rep.grad_norm_sq = norm_sq(g);

  const CVector ah = e.forward(rep.h);
  double s = 0.0;
  for (std::size_t i = 0; i < e.m(); ++i) {
    const double mag2 = ah.re[i] * ah.re[i] + ah.im[i] * ah.im[i];
    s += mag2 * mag2;
  }
  rep.fourth_moment = s / static_cast<double>(e.m());

  rep.satisfied = rep.lhs_curvature >= rep.rc_rhs();
  const double quarter = (1.0 + rep.delta) / 4.0;
  rep.curvature_rhs =
      (1.0 / rep.alpha + quarter) * rep.dist_sq + rep.fourth_moment / 10.0;
  rep.curvature_satisfied = rep.lhs_curvature >= rep.curvature_rhs;
  rep.smoothness_rhs = rep.beta_rc * (quarter * rep.dist_sq + rep.fourth_moment / 10.0);
  rep.smoothness_satisfied = rep.grad_norm_sq <= rep.smoothness_rhs;
  rep.inside_region = in_region_E(e, y, z);
  return rep;
}

}  // namespace prwf
