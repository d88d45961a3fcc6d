#include "prwf/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "prwf/errors.hpp"
#include "prwf/kernels.hpp"
#include "prwf/rng.hpp"

namespace prwf {

CVector random_gaussian_vector(std::size_t n, Field field, std::uint64_t seed) {
  Rng rng(seed);
  CVector v(n);
  const double s = field == Field::real ? 1.0 : std::sqrt(0.5);
  for (std::size_t i = 0; i < n; ++i) {
    v.re[i] = s * rng.normal();
    if (field == Field::complex) v.im[i] = s * rng.normal();
  }
  return v;
}

MeasurementEnsemble MeasurementEnsemble::gaussian(std::size_t n, std::size_t m, Field field,
                                                  std::uint64_t seed) {
  if (n < 1 || m < 1) throw ParameterError("gaussian ensemble needs n >= 1 and m >= 1");
  MeasurementEnsemble e;
  e.kind_ = Kind::gaussian;
  e.field_ = field;
  e.n_ = n;
  e.m_ = m;
  e.seed_ = seed;
  e.entries_ = random_gaussian_vector(n * m, field, seed);
  return e;
}

MeasurementEnsemble MeasurementEnsemble::cdp(std::size_t n, std::size_t num_masks,
                                             std::uint64_t seed) {
  if (!is_power_of_two(n))
    throw ParameterError("CDP length " + std::to_string(n) + " is not a power of two");
  if (num_masks < 1) throw ParameterError("CDP needs at least one mask");
  Rng rng(seed);
  CVector masks(n * num_masks);
  const double small = std::sqrt(2.0) / 2.0;
  const double large = std::sqrt(3.0);
  for (std::size_t i = 0; i < masks.size(); ++i) {
    // b1 uniform on {1, -1, j, -j}; b2 = sqrt(2)/2 w.p. 4/5, sqrt(3) w.p. 1/5.
    const std::uint64_t phase = rng.below(4);
    const double amp = rng.below(5) < 4 ? small : large;
    switch (phase) {
      case 0: masks.re[i] = amp; break;
      case 1: masks.re[i] = -amp; break;
      case 2: masks.im[i] = amp; break;
      default: masks.im[i] = -amp; break;
    }
  }
  MeasurementEnsemble e = from_masks(n, masks);
  e.seed_ = seed;
  return e;
}

MeasurementEnsemble MeasurementEnsemble::from_rows(std::size_t n, const CVector& rows,
                                                   Field field) {
  if (n < 1 || rows.size() == 0 || rows.size() % n != 0)
    throw ParameterError("sensing rows must form an m x n matrix with m, n >= 1");
  if (field == Field::real && !rows.is_real())
    throw ParameterError("real ensemble with complex entries");
  MeasurementEnsemble e;
  e.kind_ = Kind::gaussian;
  e.field_ = field;
  e.n_ = n;
  e.m_ = rows.size() / n;
  e.entries_ = rows;
  return e;
}

MeasurementEnsemble MeasurementEnsemble::from_masks(std::size_t n, const CVector& masks) {
  if (!is_power_of_two(n))
    throw ParameterError("CDP length " + std::to_string(n) + " is not a power of two");
  if (masks.size() == 0 || masks.size() % n != 0)
    throw ParameterError("masks must form an L x n matrix with L >= 1");
  MeasurementEnsemble e;
  e.kind_ = Kind::cdp;
  e.field_ = Field::complex;
  e.n_ = n;
  e.num_masks_ = masks.size() / n;
  e.m_ = n * e.num_masks_;
  e.entries_ = masks;
  e.plan_ = std::make_shared<const FftPlan>(n);
  return e;
}

CVector MeasurementEnsemble::row(std::size_t i) const {
  if (i >= m_) throw ParameterError("row index out of range");
  CVector a(n_);
  if (kind_ == Kind::gaussian) {
    for (std::size_t t = 0; t < n_; ++t) a.set(t, entries_[i * n_ + t]);
    return a;
  }
  const std::size_t l = i / n_;
  const std::size_t k = i % n_;
  for (std::size_t t = 0; t < n_; ++t) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>((k * t) % n_) / static_cast<double>(n_);
    a.set(t, entries_[l * n_ + t] * std::polar(1.0, angle));
  }
  return a;
}

CVector MeasurementEnsemble::forward(const CVector& z) const {
  CVector out;
  forward(z, out);
  return out;
}

void MeasurementEnsemble::forward(const CVector& z, CVector& out) const {
  if (z.size() != n_)
    throw ParameterError("forward: signal length " + std::to_string(z.size()) +
                         " does not match n = " + std::to_string(n_));
  out.re.resize(m_);
  out.im.resize(m_);
  if (kind_ == Kind::cdp) {
    forward_cdp(z, out);
    return;
  }
  const auto& k = kernels::active();
  if (field_ == Field::real) {
    k.matvec_real(entries_.re.data(), m_, n_, z.re.data(), out.re.data());
    if (z.is_real())
      std::fill(out.im.begin(), out.im.end(), 0.0);
    else
      k.matvec_real(entries_.re.data(), m_, n_, z.im.data(), out.im.data());
    return;
  }
  k.matvec_conj(entries_.re.data(), entries_.im.data(), m_, n_, z.re.data(), z.im.data(),
                out.re.data(), out.im.data());
}

CVector MeasurementEnsemble::adjoint(const CVector& coeffs) const {
  CVector out;
  adjoint(coeffs, out);
  return out;
}

void MeasurementEnsemble::adjoint(const CVector& coeffs, CVector& out) const {
  if (coeffs.size() != m_)
    throw ParameterError("adjoint: coefficient length " + std::to_string(coeffs.size()) +
                         " does not match m = " + std::to_string(m_));
  out.re.resize(n_);
  out.im.resize(n_);
  if (kind_ == Kind::cdp) {
    adjoint_cdp(coeffs, out);
    return;
  }
  const auto& k = kernels::active();
  if (field_ == Field::real) {
    k.adjoint_real(entries_.re.data(), m_, n_, coeffs.re.data(), out.re.data());
    if (coeffs.is_real())
      std::fill(out.im.begin(), out.im.end(), 0.0);
    else
      k.adjoint_real(entries_.re.data(), m_, n_, coeffs.im.data(), out.im.data());
    return;
  }
  k.adjoint_complex(entries_.re.data(), entries_.im.data(), m_, n_, coeffs.re.data(),
                    coeffs.im.data(), out.re.data(), out.im.data());
}

void MeasurementEnsemble::forward_cdp(const CVector& z, CVector& out) const {
  for (std::size_t l = 0; l < num_masks_; ++l) {
    const double* dr = entries_.re.data() + l * n_;
    const double* di = entries_.im.data() + l * n_;
    double* sr = out.re.data() + l * n_;
    double* si = out.im.data() + l * n_;
    for (std::size_t t = 0; t < n_; ++t) {
      // conj(d) * z
      sr[t] = dr[t] * z.re[t] + di[t] * z.im[t];
      si[t] = dr[t] * z.im[t] - di[t] * z.re[t];
    }
    plan_->execute({sr, n_}, {si, n_}, FftDirection::forward);
  }
}

void MeasurementEnsemble::adjoint_cdp(const CVector& coeffs, CVector& out) const {
  std::fill(out.re.begin(), out.re.end(), 0.0);
  std::fill(out.im.begin(), out.im.end(), 0.0);
  std::vector<double> tr(n_), ti(n_);
  for (std::size_t l = 0; l < num_masks_; ++l) {
    std::copy_n(coeffs.re.data() + l * n_, n_, tr.data());
    std::copy_n(coeffs.im.data() + l * n_, n_, ti.data());
    // sum_k c_k exp(+2 pi j k t / n): the unscaled inverse transform.
    plan_->execute(tr, ti, FftDirection::inverse, /*scale_inverse=*/false);
    const double* dr = entries_.re.data() + l * n_;
    const double* di = entries_.im.data() + l * n_;
    for (std::size_t t = 0; t < n_; ++t) {
      out.re[t] += dr[t] * tr[t] - di[t] * ti[t];
      out.im[t] += dr[t] * ti[t] + di[t] * tr[t];
    }
  }
}

double MeasurementEnsemble::total_row_norm_sq() const {
  // Each CDP row d_l[t] e^{2 pi j k t/n} has squared norm sum_t |d_l[t]|^2,
  // and every mask appears in n rows.
  const double s = norm_sq(entries_);
  return kind_ == Kind::cdp ? static_cast<double>(n_) * s : s;
}

IntensityVector intensities(const MeasurementEnsemble& e, const CVector& x,
                            std::optional<std::span<const double>> noise) {
  const CVector u = e.forward(x);
  IntensityVector y;
  y.values.resize(e.m());
  for (std::size_t i = 0; i < e.m(); ++i) y.values[i] = u.re[i] * u.re[i] + u.im[i] * u.im[i];
  if (noise) {
    if (noise->size() != e.m()) throw ParameterError("noise length does not match m");
    y.noise.emplace(noise->begin(), noise->end());
    for (std::size_t i = 0; i < e.m(); ++i) y.values[i] += (*noise)[i];
  }
  return y;
}

}  // namespace prwf
