#include "prwf/init.hpp"

#include <cmath>

#include "prwf/errors.hpp"

namespace prwf {

double init_scale(const MeasurementEnsemble& e, const IntensityVector& y) {
  if (y.size() != e.m()) throw ParameterError("intensity length does not match m");
  double sum_y = 0.0;
  bool any_nonzero = false;
  for (double v : y.values) {
    sum_y += v;
    any_nonzero = any_nonzero || v != 0.0;
  }
  if (!any_nonzero) throw DegenerateInputError("all intensities are zero");
  const double lambda_sq = static_cast<double>(e.n()) * sum_y / e.total_row_norm_sq();
  if (!(lambda_sq > 0.0)) throw DegenerateInputError("intensities sum to a non-positive value");
  return std::sqrt(lambda_sq);
}

CVector apply_spectral_matrix(const MeasurementEnsemble& e, const IntensityVector& y,
                              const CVector& v) {
  CVector u = e.forward(v);
  const double inv_m = 1.0 / static_cast<double>(e.m());
  for (std::size_t i = 0; i < e.m(); ++i) {
    const double s = y.values[i] * inv_m;
    u.re[i] *= s;
    u.im[i] *= s;
  }
  return e.adjoint(u);
}

namespace {

void normalize(CVector& v) {
  const double s = 1.0 / norm(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    v.re[i] *= s;
    v.im[i] *= s;
  }
}

}  // namespace

InitReport spectral_init(const MeasurementEnsemble& e, const IntensityVector& y,
                         const PowerMethodOptions& opts, std::uint64_t seed) {
  if (opts.max_iters < 1) throw ParameterError("power method needs max_iters >= 1");
  if (!(opts.tol > 0.0)) throw ParameterError("power method needs tol > 0");
  InitReport report;
  report.seed = seed;
  report.lambda = init_scale(e, y);

  CVector v = random_gaussian_vector(e.n(), e.field(), seed);
  normalize(v);
  for (int it = 1; it <= opts.max_iters; ++it) {
    CVector next = apply_spectral_matrix(e, y, v);
    const double next_norm = norm(next);
    report.iterations_used = it;
    if (next_norm == 0.0) break;  // v already lies in the null space of Y
    normalize(next);
    // Sine of the angle between successive iterates: the part of `next`
    // orthogonal to v.
    CVector orth = next;
    axpy(-inner(v, next), v, orth);
    v = std::move(next);
    if (norm(orth) < opts.tol) break;
  }

  const CVector yv = apply_spectral_matrix(e, y, v);
  report.eig_value = inner(v, yv).real();
  CVector res = yv;
  axpy(-report.eig_value, v, res);
  report.eig_residual = norm(res);
  report.z0 = scaled(v, report.lambda);
  return report;
}

}  // namespace prwf
