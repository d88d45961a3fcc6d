#include <immintrin.h>

#include "prwf/kernels.hpp"

namespace prwf::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  const __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void matvec_real(const double* a, std::size_t m, std::size_t n, const double* z, double* out) {
  const std::size_t n8 = n & ~std::size_t{7};
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < m; ++i) {
    const double* row = a + i * n;
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j < n8; j += 8) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(z + j), acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j + 4), _mm256_loadu_pd(z + j + 4), acc1);
    }
    for (; j < n4; j += 4)
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_loadu_pd(z + j), acc0);
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; j < n; ++j) acc += row[j] * z[j];
    out[i] = acc;
  }
}

void matvec_conj(const double* a_re, const double* a_im, std::size_t m, std::size_t n,
                 const double* z_re, const double* z_im, double* out_re, double* out_im) {
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t i = 0; i < m; ++i) {
    const double* ar = a_re + i * n;
    const double* ai = a_im + i * n;
    __m256d acc_re = _mm256_setzero_pd();
    __m256d acc_im = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j < n4; j += 4) {
      const __m256d vr = _mm256_loadu_pd(ar + j);
      const __m256d vi = _mm256_loadu_pd(ai + j);
      const __m256d zr = _mm256_loadu_pd(z_re + j);
      const __m256d zi = _mm256_loadu_pd(z_im + j);
      acc_re = _mm256_fmadd_pd(vr, zr, acc_re);
      acc_re = _mm256_fmadd_pd(vi, zi, acc_re);
      acc_im = _mm256_fmadd_pd(vr, zi, acc_im);
      acc_im = _mm256_fnmadd_pd(vi, zr, acc_im);
    }
    double sr = hsum(acc_re), si = hsum(acc_im);
    for (; j < n; ++j) {
      sr += ar[j] * z_re[j] + ai[j] * z_im[j];
      si += ar[j] * z_im[j] - ai[j] * z_re[j];
    }
    out_re[i] = sr;
    out_im[i] = si;
  }
}

void adjoint_real(const double* a, std::size_t m, std::size_t n, const double* c, double* out) {
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t j = 0; j < n; ++j) out[j] = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    const double* r0 = a + i * n;
    const double* r1 = r0 + n;
    const double* r2 = r1 + n;
    const double* r3 = r2 + n;
    const __m256d c0 = _mm256_set1_pd(c[i]);
    const __m256d c1 = _mm256_set1_pd(c[i + 1]);
    const __m256d c2 = _mm256_set1_pd(c[i + 2]);
    const __m256d c3 = _mm256_set1_pd(c[i + 3]);
    std::size_t j = 0;
    for (; j < n4; j += 4) {
      __m256d acc = _mm256_loadu_pd(out + j);
      acc = _mm256_fmadd_pd(c0, _mm256_loadu_pd(r0 + j), acc);
      acc = _mm256_fmadd_pd(c1, _mm256_loadu_pd(r1 + j), acc);
      acc = _mm256_fmadd_pd(c2, _mm256_loadu_pd(r2 + j), acc);
      acc = _mm256_fmadd_pd(c3, _mm256_loadu_pd(r3 + j), acc);
      _mm256_storeu_pd(out + j, acc);
    }
    for (; j < n; ++j)
      out[j] += c[i] * r0[j] + c[i + 1] * r1[j] + c[i + 2] * r2[j] + c[i + 3] * r3[j];
  }
  for (; i < m; ++i) {
    const double* row = a + i * n;
    const __m256d ci = _mm256_set1_pd(c[i]);
    std::size_t j = 0;
    for (; j < n4; j += 4)
      _mm256_storeu_pd(out + j,
                       _mm256_fmadd_pd(ci, _mm256_loadu_pd(row + j), _mm256_loadu_pd(out + j)));
    for (; j < n; ++j) out[j] += c[i] * row[j];
  }
}

void adjoint_complex(const double* a_re, const double* a_im, std::size_t m, std::size_t n,
                     const double* c_re, const double* c_im, double* out_re, double* out_im) {
  const std::size_t n4 = n & ~std::size_t{3};
  for (std::size_t j = 0; j < n; ++j) out_re[j] = out_im[j] = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= m; i += 2) {
    const double* ar0 = a_re + i * n;
    const double* ai0 = a_im + i * n;
    const double* ar1 = ar0 + n;
    const double* ai1 = ai0 + n;
    const __m256d cr0 = _mm256_set1_pd(c_re[i]);
    const __m256d ci0 = _mm256_set1_pd(c_im[i]);
    const __m256d cr1 = _mm256_set1_pd(c_re[i + 1]);
    const __m256d ci1 = _mm256_set1_pd(c_im[i + 1]);
    std::size_t j = 0;
    for (; j < n4; j += 4) {
      const __m256d vr0 = _mm256_loadu_pd(ar0 + j);
      const __m256d vi0 = _mm256_loadu_pd(ai0 + j);
      const __m256d vr1 = _mm256_loadu_pd(ar1 + j);
      const __m256d vi1 = _mm256_loadu_pd(ai1 + j);
      __m256d o_re = _mm256_loadu_pd(out_re + j);
      __m256d o_im = _mm256_loadu_pd(out_im + j);
      o_re = _mm256_fmadd_pd(cr0, vr0, o_re);
      o_re = _mm256_fnmadd_pd(ci0, vi0, o_re);
      o_re = _mm256_fmadd_pd(cr1, vr1, o_re);
      o_re = _mm256_fnmadd_pd(ci1, vi1, o_re);
      o_im = _mm256_fmadd_pd(cr0, vi0, o_im);
      o_im = _mm256_fmadd_pd(ci0, vr0, o_im);
      o_im = _mm256_fmadd_pd(cr1, vi1, o_im);
      o_im = _mm256_fmadd_pd(ci1, vr1, o_im);
      _mm256_storeu_pd(out_re + j, o_re);
      _mm256_storeu_pd(out_im + j, o_im);
    }
    for (; j < n; ++j) {
      out_re[j] += c_re[i] * ar0[j] - c_im[i] * ai0[j] + c_re[i + 1] * ar1[j] -
                   c_im[i + 1] * ai1[j];
      out_im[j] += c_re[i] * ai0[j] + c_im[i] * ar0[j] + c_re[i + 1] * ai1[j] +
                   c_im[i + 1] * ar1[j];
    }
  }
  for (; i < m; ++i) {
    const double* ar = a_re + i * n;
    const double* ai = a_im + i * n;
    for (std::size_t j = 0; j < n; ++j) {
      out_re[j] += c_re[i] * ar[j] - c_im[i] * ai[j];
      out_im[j] += c_re[i] * ai[j] + c_im[i] * ar[j];
    }
  }
}

double gradient_coeffs(const double* u_re, const double* u_im, const double* y, const double* w,
                       std::size_t m, double scale, double* c_re, double* c_im) {
  const std::size_t m4 = m & ~std::size_t{3};
  const __m256d s = _mm256_set1_pd(scale);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  if (u_im != nullptr) {
    for (; i < m4; i += 4) {
      const __m256d ur = _mm256_loadu_pd(u_re + i);
      const __m256d ui = _mm256_loadu_pd(u_im + i);
      const __m256d mag = _mm256_fmadd_pd(ui, ui, _mm256_mul_pd(ur, ur));
      const __m256d r = _mm256_sub_pd(mag, _mm256_loadu_pd(y + i));
      const __m256d wr = _mm256_mul_pd(_mm256_loadu_pd(w + i), r);
      acc = _mm256_fmadd_pd(wr, r, acc);
      const __m256d f = _mm256_mul_pd(s, wr);
      _mm256_storeu_pd(c_re + i, _mm256_mul_pd(f, ur));
      _mm256_storeu_pd(c_im + i, _mm256_mul_pd(f, ui));
    }
  } else {
    const __m256d zero = _mm256_setzero_pd();
    for (; i < m4; i += 4) {
      const __m256d ur = _mm256_loadu_pd(u_re + i);
      const __m256d r = _mm256_sub_pd(_mm256_mul_pd(ur, ur), _mm256_loadu_pd(y + i));
      const __m256d wr = _mm256_mul_pd(_mm256_loadu_pd(w + i), r);
      acc = _mm256_fmadd_pd(wr, r, acc);
      _mm256_storeu_pd(c_re + i, _mm256_mul_pd(_mm256_mul_pd(s, wr), ur));
      _mm256_storeu_pd(c_im + i, zero);
    }
  }
  double sum = hsum(acc);
  for (; i < m; ++i) {
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
  const std::size_t m4 = m & ~std::size_t{3};
  const __m256d t = _mm256_set1_pd(tau);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  if (u_im != nullptr && g_im != nullptr) {
    for (; i < m4; i += 4) {
      const __m256d vr = _mm256_fnmadd_pd(t, _mm256_loadu_pd(g_re + i), _mm256_loadu_pd(u_re + i));
      const __m256d vi = _mm256_fnmadd_pd(t, _mm256_loadu_pd(g_im + i), _mm256_loadu_pd(u_im + i));
      const __m256d r = _mm256_sub_pd(_mm256_fmadd_pd(vi, vi, _mm256_mul_pd(vr, vr)),
                                      _mm256_loadu_pd(y + i));
      acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), r), r, acc);
    }
  } else if (u_im == nullptr && g_im == nullptr) {
    for (; i < m4; i += 4) {
      const __m256d vr = _mm256_fnmadd_pd(t, _mm256_loadu_pd(g_re + i), _mm256_loadu_pd(u_re + i));
      const __m256d r = _mm256_sub_pd(_mm256_mul_pd(vr, vr), _mm256_loadu_pd(y + i));
      acc = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + i), r), r, acc);
    }
  }
  double sum = hsum(acc);
  for (; i < m; ++i) {
    const double vr = u_re[i] - tau * g_re[i];
    const double vi = (u_im ? u_im[i] : 0.0) - tau * (g_im ? g_im[i] : 0.0);
    const double r = vr * vr + vi * vi - y[i];
    sum += w[i] * r * r;
  }
  return sum;
}

constexpr Table kAvx2{
    "avx2",          matvec_real,     matvec_conj,    adjoint_real,
    adjoint_complex, gradient_coeffs, line_objective,
};

}  // namespace

const Table& avx2_table_unchecked() noexcept { return kAvx2; }

}  // namespace prwf::kernels
