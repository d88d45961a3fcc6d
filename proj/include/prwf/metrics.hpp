#pragma once

#include <complex>
#include <cstdint>

#include "prwf/measurement.hpp"
#include "prwf/solve.hpp"
#include "prwf/vector.hpp"

namespace prwf {

/// Phase that best aligns x with z: x e^{j phi} is the closest point of the
/// ambiguity set to z. Restricted to {0, pi} for real signals.
std::complex<double> best_phase(const CVector& z, const CVector& x, Field field);

/// min_phi ||z - x e^{j phi}||, closed form ||z||^2 + ||x||^2 - 2|x* z| for
/// complex signals and min over sign flips for real ones.
double dist(const CVector& z, const CVector& x, Field field);
inline double dist(const CVector& z, const Signal& x) { return dist(z, x.values, x.field); }

/// dist(z, x) / ||x||. Throws DegenerateInputError for x = 0.
double nmse(const CVector& z, const CVector& x, Field field);
inline double nmse(const CVector& z, const Signal& x) { return nmse(z, x.values, x.field); }

inline constexpr double kRegionEThreshold = 0.1;

double max_abs_residual(const MeasurementEnsemble& e, const IntensityVector& y,
                        const CVector& z);
/// True iff max_i | |<a_i, z>|^2 - y_i | < 0.1.
bool in_region_E(const MeasurementEnsemble& e, const IntensityVector& y, const CVector& z);

struct RCOptions {
  double alpha = 10.0;
  double beta_rc = 0.0;  // 0 selects 700 + 4n
  double delta = 0.01;
  double eta = 0.9;
};

/// Regularity-condition probe at z with reweighted weights computed at z.
struct RCReport {
  CVector z_probe;
  CVector h;                     // e^{-j phi(z)} z - x
  double lhs_curvature = 0.0;    // Re <grad f(z), z - x e^{j phi(z)}>
  double dist_sq = 0.0;
  double grad_norm_sq = 0.0;
  double fourth_moment = 0.0;    // (1/m) sum |a_i* h|^4
  double alpha = 0.0;
  double beta_rc = 0.0;
  double delta = 0.0;
  bool satisfied = false;        // lhs >= dist_sq/alpha + grad_norm_sq/beta_rc

  double curvature_rhs = 0.0;    // (1/alpha + (1+delta)/4) dist^2 + fourth_moment/10
  bool curvature_satisfied = false;
  double smoothness_rhs = 0.0;   // beta_rc ((1+delta)/4 dist^2 + fourth_moment/10)
  bool smoothness_satisfied = false;
  bool inside_region = false;

  double rc_rhs() const noexcept { return dist_sq / alpha + grad_norm_sq / beta_rc; }
};

RCReport rc_probe(const MeasurementEnsemble& e, const IntensityVector& y, const Signal& x,
                  const CVector& z, const RCOptions& opts = {});

/// Outcome of one Monte-Carlo trial.
struct TrialRecord {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  Field field = Field::real;
  Method method = Method::rwf;
  bool success = false;
  double final_nmse = 0.0;
  int outer_iters = 0;
  long total_grad_steps = 0;
  double wall_time_seconds = 0.0;
};

}  // namespace prwf
