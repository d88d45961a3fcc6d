#include "prwf/kernels.hpp"

#include <algorithm>

namespace prwf::kernels {
namespace {

void matvec_real(const double* a, std::size_t m, std::size_t n, const double* z, double* out) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a + i * n;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += row[j] * z[j];
    out[i] = acc;
  }
}

void matvec_conj(const double* a_re, const double* a_im, std::size_t m, std::size_t n,
                 const double* z_re, const double* z_im, double* out_re, double* out_im) {
  for (std::size_t i = 0; i < m; ++i) {
    const double* ar = a_re + i * n;
    const double* ai = a_im + i * n;
    double acc_re = 0.0, acc_im = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      acc_re += ar[j] * z_re[j] + ai[j] * z_im[j];
      acc_im += ar[j] * z_im[j] - ai[j] * z_re[j];
    }
    out_re[i] = acc_re;
    out_im[i] = acc_im;
  }
}

void adjoint_real(const double* a, std::size_t m, std::size_t n, const double* c, double* out) {
  std::fill(out, out + n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a + i * n;
    const double ci = c[i];
    for (std::size_t j = 0; j < n; ++j) out[j] += ci * row[j];
  }
}

void adjoint_complex(const double* a_re, const double* a_im, std::size_t m, std::size_t n,
                     const double* c_re, const double* c_im, double* out_re, double* out_im) {
  std::fill(out_re, out_re + n, 0.0);
  std::fill(out_im, out_im + n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double* ar = a_re + i * n;
    const double* ai = a_im + i * n;
    const double cr = c_re[i], ci = c_im[i];
    for (std::size_t j = 0; j < n; ++j) {
      out_re[j] += cr * ar[j] - ci * ai[j];
      out_im[j] += cr * ai[j] + ci * ar[j];
    }
  }
}

double gradient_coeffs(const double* u_re, const double* u_im, const double* y, const double* w,
                       std::size_t m, double scale, double* c_re, double* c_im) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double ur = u_re[i];
    const double ui = u_im ? u_im[i] : 0.0;
    const double r = ur * ur + ui * ui - y[i];
    const double wr = w[i] * r;
    sum += wr * r;
    c_re[i] = scale * wr * ur;
    c_im[i] = scale * wr * ui;
  }
  return sum;
}

double line_objective(const double* u_re, const double* u_im, const double* g_re,
                      const double* g_im, double tau, const double* y, const double* w,
                      std::size_t m) {
  double sum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double vr = u_re[i] - tau * g_re[i];
    const double vi = (u_im ? u_im[i] : 0.0) - tau * (g_im ? g_im[i] : 0.0);
    const double r = vr * vr + vi * vi - y[i];
    sum += w[i] * r * r;
  }
  return sum;
}

constexpr Table kScalar{
    "scalar",     matvec_real,     matvec_conj,    adjoint_real,
    adjoint_complex, gradient_coeffs, line_objective,
};

}  // namespace

const Table& scalar_table() noexcept { return kScalar; }

}  // namespace prwf::kernels
