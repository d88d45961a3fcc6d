#include "prwf/vector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "prwf/errors.hpp"

namespace prwf {

std::string_view to_string(Field f) noexcept {
  return f == Field::real ? "real" : "complex";
}

Field parse_field(std::string_view s) {
  if (s == "real") return Field::real;
  if (s == "complex") return Field::complex;
  throw ParameterError("unknown field kind '" + std::string(s) + "'");
}

CVector CVector::from_complex(std::span<const std::complex<double>> v) {
  CVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.set(i, v[i]);
  return out;
}

bool CVector::is_real() const noexcept {
  return std::all_of(im.begin(), im.end(), [](double v) { return v == 0.0; });
}

std::vector<std::complex<double>> CVector::to_complex() const {
  std::vector<std::complex<double>> out(size());
  for (std::size_t i = 0; i < size(); ++i) out[i] = (*this)[i];
  return out;
}

std::complex<double> inner(const CVector& u, const CVector& v) {
  if (u.size() != v.size()) throw ParameterError("inner: length mismatch");
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    re += u.re[i] * v.re[i] + u.im[i] * v.im[i];
    im += u.re[i] * v.im[i] - u.im[i] * v.re[i];
  }
  return {re, im};
}

double norm_sq(const CVector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v.re[i] * v.re[i] + v.im[i] * v.im[i];
  return s;
}

double norm(const CVector& v) { return std::sqrt(norm_sq(v)); }

void axpy(std::complex<double> alpha, const CVector& x, CVector& y) {
  if (x.size() != y.size()) throw ParameterError("axpy: length mismatch");
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < x.size(); ++i) {
    y.re[i] += ar * x.re[i] - ai * x.im[i];
    y.im[i] += ar * x.im[i] + ai * x.re[i];
  }
}

CVector scaled(const CVector& v, std::complex<double> alpha) {
  CVector out(v.size());
  axpy(alpha, v, out);
  return out;
}

CVector difference(const CVector& a, const CVector& b) {
  CVector out = a;
  axpy(-1.0, b, out);
  return out;
}

Signal::Signal(CVector v, Field f) : values(std::move(v)), field(f) {
  if (values.size() == 0) throw ParameterError("signal length must be at least 1");
  if (field == Field::real && !values.is_real())
    throw ParameterError("real signal has a nonzero imaginary part");
}

}  // namespace prwf
