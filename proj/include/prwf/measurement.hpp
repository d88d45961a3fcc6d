#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "prwf/fft.hpp"
#include "prwf/vector.hpp"

namespace prwf {

/// Squared magnitudes y_i = |<a_i, x>|^2 + eps_i.
struct IntensityVector {
  std::vector<double> values;
  std::optional<std::vector<double>> noise;

  std::size_t size() const noexcept { return values.size(); }
};

/// A set of m sensing vectors a_i in C^n, either stored explicitly
/// (Gaussian) or implied by L coded diffraction masks and the length-n DFT.
///
/// forward(z)_i = <a_i, z> = a_i* z. For CDP the index is i = l*n + k and
///   forward(z)_{l,k} = sum_t z[t] conj(d_l[t]) exp(-2 pi j k t / n).
/// adjoint(c) = sum_i c_i a_i, so <forward(z), c> = <z, adjoint(c)>.
///
/// Immutable after construction and safe to share between threads.
class MeasurementEnsemble {
 public:
  enum class Kind { gaussian, cdp };

  static MeasurementEnsemble gaussian(std::size_t n, std::size_t m, Field field,
                                      std::uint64_t seed);
  static MeasurementEnsemble cdp(std::size_t n, std::size_t num_masks, std::uint64_t seed);

  /// Explicit sensing vectors, one per row (m rows of length n).
  static MeasurementEnsemble from_rows(std::size_t n, const CVector& rows, Field field);
  /// Explicit masks, L rows of length n.
  static MeasurementEnsemble from_masks(std::size_t n, const CVector& masks);

  Kind kind() const noexcept { return kind_; }
  Field field() const noexcept { return field_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t m() const noexcept { return m_; }
  std::size_t num_masks() const noexcept { return num_masks_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Row-major m x n (Gaussian) or L x n (CDP) entries.
  const CVector& entries() const noexcept { return entries_; }
  /// Sensing vector a_i materialized explicitly (CDP rows are d_l[t] e^{2 pi j k t/n}).
  CVector row(std::size_t i) const;

  CVector forward(const CVector& z) const;
  void forward(const CVector& z, CVector& out) const;
  CVector adjoint(const CVector& coeffs) const;
  void adjoint(const CVector& coeffs, CVector& out) const;

  /// sum_i ||a_i||^2
  double total_row_norm_sq() const;

 private:
  MeasurementEnsemble() = default;
  void forward_cdp(const CVector& z, CVector& out) const;
  void adjoint_cdp(const CVector& coeffs, CVector& out) const;

  Kind kind_ = Kind::gaussian;
  Field field_ = Field::complex;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::size_t num_masks_ = 0;
  std::uint64_t seed_ = 0;
  CVector entries_;
  std::shared_ptr<const FftPlan> plan_;
};

/// Standard normal (real) or CN(0, I) with N(0, 1/2) parts (complex) vector.
CVector random_gaussian_vector(std::size_t n, Field field, std::uint64_t seed);

IntensityVector intensities(const MeasurementEnsemble& e, const CVector& x,
                            std::optional<std::span<const double>> noise = std::nullopt);

}  // namespace prwf
