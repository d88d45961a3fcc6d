#pragma once

#include <cstdint>

#include "prwf/measurement.hpp"
#include "prwf/vector.hpp"

namespace prwf {

struct InitReport {
  CVector z0;
  double lambda = 0.0;
  double eig_value = 0.0;     // v* Y v for the unit eigenvector estimate
  double eig_residual = 0.0;  // ||Y v - (v* Y v) v||
  int iterations_used = 0;
  std::uint64_t seed = 0;
};

struct PowerMethodOptions {
  int max_iters = 1000;
  double tol = 1e-6;
};

/// lambda = sqrt(n * sum_i y_i / sum_i ||a_i||^2). Throws DegenerateInputError
/// when y is identically zero.
double init_scale(const MeasurementEnsemble& e, const IntensityVector& y);

/// Leading eigenvector of Y = (1/m) sum_i y_i a_i a_i*, applied matrix-free
/// and scaled to norm lambda. Starts from a seeded random unit vector that is
/// real when the ensemble is real.
InitReport spectral_init(const MeasurementEnsemble& e, const IntensityVector& y,
                         const PowerMethodOptions& opts, std::uint64_t seed);

/// One application of Y.
CVector apply_spectral_matrix(const MeasurementEnsemble& e, const IntensityVector& y,
                              const CVector& v);

}  // namespace prwf
