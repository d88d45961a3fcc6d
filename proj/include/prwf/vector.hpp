#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace prwf {

enum class Field { real, complex };

std::string_view to_string(Field f) noexcept;
Field parse_field(std::string_view s);

/// Complex vector stored as separate real and imaginary planes, the layout
/// the SIMD kernels consume directly.
struct CVector {
  std::vector<double> re;
  std::vector<double> im;

  CVector() = default;
  explicit CVector(std::size_t n) : re(n, 0.0), im(n, 0.0) {}
  static CVector from_complex(std::span<const std::complex<double>> v);

  std::size_t size() const noexcept { return re.size(); }
  std::complex<double> operator[](std::size_t i) const { return {re[i], im[i]}; }
  void set(std::size_t i, std::complex<double> v) {
    re[i] = v.real();
    im[i] = v.imag();
  }
  bool is_real() const noexcept;
  std::vector<std::complex<double>> to_complex() const;

  friend bool operator==(const CVector&, const CVector&) = default;
};

/// u* v, conjugate-linear in the first argument. Every inner product in the
/// library uses this convention, so <a, z> = a* z.
std::complex<double> inner(const CVector& u, const CVector& v);
double norm_sq(const CVector& v);
double norm(const CVector& v);
/// y += alpha * x
void axpy(std::complex<double> alpha, const CVector& x, CVector& y);
CVector scaled(const CVector& v, std::complex<double> alpha);
CVector difference(const CVector& a, const CVector& b);

/// A signal of length n together with the field it lives in. Real signals
/// keep an all-zero imaginary plane.
struct Signal {
  CVector values;
  Field field = Field::complex;

  Signal() = default;
  Signal(CVector v, Field f);
  std::size_t size() const noexcept { return values.size(); }
};

}  // namespace prwf
