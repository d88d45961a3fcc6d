#include "prwf/objective.hpp"

#include <cmath>
#include <string>

#include "prwf/errors.hpp"
#include "prwf/kernels.hpp"

namespace prwf {
namespace {

void check_lengths(const MeasurementEnsemble& e, const IntensityVector& y, const CVector& z) {
  if (y.size() != e.m()) throw ParameterError("intensity length does not match m");
  if (z.size() != e.n()) throw ParameterError("signal length does not match n");
}

void check_weights(const MeasurementEnsemble& e, const WeightVector& w) {
  if (w.size() != e.m()) throw ParameterError("weight length does not match m");
}

}  // namespace

std::vector<double> residuals(const MeasurementEnsemble& e, const IntensityVector& y,
                              const CVector& z) {
  check_lengths(e, y, z);
  const CVector u = e.forward(z);
  std::vector<double> r(e.m());
  for (std::size_t i = 0; i < e.m(); ++i)
    r[i] = u.re[i] * u.re[i] + u.im[i] * u.im[i] - y.values[i];
  return r;
}

WeightVector unit_weights(std::size_t m) {
  return WeightVector{std::vector<double>(m, 1.0), {}, WeightMode::unit};
}

WeightVector compute_weights(const MeasurementEnsemble& e, const IntensityVector& y,
                             const CVector& z_prev, std::span<const double> etas) {
  if (etas.size() != e.m()) throw ParameterError("eta length does not match m");
  for (double eta : etas)
    if (!(eta > 0.0)) throw ParameterError("eta must be positive, got " + std::to_string(eta));
  const std::vector<double> r = residuals(e, y, z_prev);
  WeightVector w{std::vector<double>(e.m()), std::vector<double>(etas.begin(), etas.end()),
                 WeightMode::reweighted};
  for (std::size_t i = 0; i < e.m(); ++i) w.omegas[i] = 1.0 / (std::abs(r[i]) + etas[i]);
  return w;
}

WeightVector compute_weights(const MeasurementEnsemble& e, const IntensityVector& y,
                             const CVector& z_prev, double eta) {
  const std::vector<double> etas(e.m(), eta);
  return compute_weights(e, y, z_prev, etas);
}

WeightVector compute_truncation_weights(const MeasurementEnsemble& e, const IntensityVector& y,
                                        const CVector& z_prev, double threshold_c) {
  if (!(threshold_c > 0.0) || !std::isfinite(threshold_c))
    throw ParameterError("truncation threshold must be positive and finite");
  const std::vector<double> r = residuals(e, y, z_prev);
  WeightVector w{std::vector<double>(e.m()), {}, WeightMode::truncated};
  for (std::size_t i = 0; i < e.m(); ++i) w.omegas[i] = std::abs(r[i]) >= threshold_c ? 0.0 : 1.0;
  return w;
}

double objective_value(const MeasurementEnsemble& e, const IntensityVector& y,
                       const WeightVector& w, const CVector& z) {
  check_lengths(e, y, z);
  check_weights(e, w);
  const CVector u = e.forward(z);
  const double sum = kernels::active().line_objective(u.re.data(), u.im.data(), u.re.data(),
                                                      u.im.data(), 0.0, y.values.data(),
                                                      w.omegas.data(), e.m());
  return sum / (2.0 * static_cast<double>(e.m()));
}

CVector wirtinger_gradient(const MeasurementEnsemble& e, const IntensityVector& y,
                           const WeightVector& w, const CVector& z) {
  check_lengths(e, y, z);
  check_weights(e, w);
  const CVector u = e.forward(z);
  CVector c(e.m());
  kernels::active().gradient_coeffs(u.re.data(), u.im.data(), y.values.data(), w.omegas.data(),
                                    e.m(), 1.0 / static_cast<double>(e.m()), c.re.data(),
                                    c.im.data());
  return e.adjoint(c);
}

}  // namespace prwf
