#pragma once

#include <span>
#include <vector>

#include "prwf/measurement.hpp"
#include "prwf/vector.hpp"

namespace prwf {

enum class WeightMode { reweighted, unit, truncated };

struct WeightVector {
  std::vector<double> omegas;
  std::vector<double> etas;  // empty unless mode == reweighted
  WeightMode mode = WeightMode::unit;

  std::size_t size() const noexcept { return omegas.size(); }
};

inline constexpr double kDefaultEta = 0.9;

/// Residuals r_i = |<a_i, z>|^2 - y_i.
std::vector<double> residuals(const MeasurementEnsemble& e, const IntensityVector& y,
                              const CVector& z);

WeightVector unit_weights(std::size_t m);

/// omega_i = 1 / (|r_i(z_prev)| + eta_i). Throws ParameterError if any eta_i <= 0.
WeightVector compute_weights(const MeasurementEnsemble& e, const IntensityVector& y,
                             const CVector& z_prev, std::span<const double> etas);
/// Scalar eta broadcast to every measurement.
WeightVector compute_weights(const MeasurementEnsemble& e, const IntensityVector& y,
                             const CVector& z_prev, double eta = kDefaultEta);

/// omega_i = 0 where |r_i(z_prev)| >= threshold_c, else 1.
WeightVector compute_truncation_weights(const MeasurementEnsemble& e, const IntensityVector& y,
                                        const CVector& z_prev, double threshold_c);

/// f(z) = (1/2m) sum_i omega_i (|<a_i, z>|^2 - y_i)^2
double objective_value(const MeasurementEnsemble& e, const IntensityVector& y,
                       const WeightVector& w, const CVector& z);

/// Wirtinger gradient (1/m) sum_i omega_i r_i a_i a_i* z. The directional
/// derivative of f along v is 2 Re <grad, v>.
CVector wirtinger_gradient(const MeasurementEnsemble& e, const IntensityVector& y,
                           const WeightVector& w, const CVector& z);

}  // namespace prwf
