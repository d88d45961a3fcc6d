#pragma once

#include <cstddef>
#include <string_view>

// Data-parallel inner loops of the solver. Every kernel has a portable scalar
// reference implementation; an AVX2/FMA variant is compiled separately and
// selected at runtime when the CPU supports it. Variants agree up to
// floating-point reassociation, never bit-for-bit.
//
// Matrices are row-major m x n. Complex data is split into real and
// imaginary planes. Where an imaginary pointer is documented as nullable,
// nullptr means "identically zero".

namespace prwf::kernels {

struct Table {
  std::string_view name;

  // out[i] = sum_j a[i,j] * z[j]
  void (*matvec_real)(const double* a, std::size_t m, std::size_t n, const double* z,
                      double* out);
  // out[i] = sum_j conj(a[i,j]) * z[j]
  void (*matvec_conj)(const double* a_re, const double* a_im, std::size_t m, std::size_t n,
                      const double* z_re, const double* z_im, double* out_re, double* out_im);
  // out[j] = sum_i c[i] * a[i,j]   (overwrites out)
  void (*adjoint_real)(const double* a, std::size_t m, std::size_t n, const double* c,
                       double* out);
  // out[j] = sum_i c[i] * a[i,j]   (overwrites out)
  void (*adjoint_complex)(const double* a_re, const double* a_im, std::size_t m, std::size_t n,
                          const double* c_re, const double* c_im, double* out_re,
                          double* out_im);

  // Returns sum_i w[i] * (|u[i]|^2 - y[i])^2 and writes
  // c[i] = scale * w[i] * (|u[i]|^2 - y[i]) * u[i].   u_im may be null.
  double (*gradient_coeffs)(const double* u_re, const double* u_im, const double* y,
                            const double* w, std::size_t m, double scale, double* c_re,
                            double* c_im);

  // Returns sum_i w[i] * (|u[i] - tau * g[i]|^2 - y[i])^2.   u_im, g_im may be null.
  double (*line_objective)(const double* u_re, const double* u_im, const double* g_re,
                           const double* g_im, double tau, const double* y, const double* w,
                           std::size_t m);
};

const Table& scalar_table() noexcept;

/// AVX2 variant, or nullptr when it was not compiled in or the running CPU
/// lacks AVX2/FMA.
const Table* avx2_table() noexcept;

/// The table used by the library. Chosen once: AVX2 when available unless
/// the environment variable PRWF_KERNELS=scalar is set.
const Table& active() noexcept;

}  // namespace prwf::kernels
