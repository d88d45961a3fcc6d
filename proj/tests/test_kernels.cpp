#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string_view>
#include <complex>
#include <vector>

#include "prwf/kernels.hpp"
#include "prwf/rng.hpp"

using namespace prwf;
using cd = std::complex<double>;

namespace {

std::vector<double> randn(std::size_t n, Rng& r) {
  std::vector<double> v(n);
  for (auto& x : v) x = r.normal();
  return v;
}

std::vector<double> positive(std::size_t n, Rng& r) {
  std::vector<double> v(n);
  for (auto& x : v) x = r.uniform() * 2.0;
  return v;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

const std::size_t kShapes[][2] = {{1, 1}, {3, 5}, {7, 4}, {8, 8}, {13, 17}, {33, 9}, {64, 31}};

// Runs every kernel of `t` and compares against std::complex oracles.
void check_against_oracle(const kernels::Table& t) {
  Rng r(99);
  for (const auto& s : kShapes) {
    const std::size_t m = s[0], n = s[1];
    const auto are = randn(m * n, r), aim = randn(m * n, r);
    const auto zre = randn(n, r), zim = randn(n, r);
    const auto cre = randn(m, r), cim = randn(m, r);

    std::vector<double> o1(m), o2(m);
    t.matvec_real(are.data(), m, n, zre.data(), o1.data());
    for (std::size_t i = 0; i < m; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += are[i * n + j] * zre[j];
      CHECK(rel(o1[i], acc) < 1e-12);
    }

    t.matvec_conj(are.data(), aim.data(), m, n, zre.data(), zim.data(), o1.data(), o2.data());
    for (std::size_t i = 0; i < m; ++i) {
      cd acc = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        acc += std::conj(cd(are[i * n + j], aim[i * n + j])) * cd(zre[j], zim[j]);
      CHECK(rel(o1[i], acc.real()) < 1e-12);
      CHECK(rel(o2[i], acc.imag()) < 1e-12);
    }

    std::vector<double> p1(n, 7.0), p2(n, 7.0);
    t.adjoint_real(are.data(), m, n, cre.data(), p1.data());
    for (std::size_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) acc += cre[i] * are[i * n + j];
      CHECK(rel(p1[j], acc) < 1e-12);
    }

    t.adjoint_complex(are.data(), aim.data(), m, n, cre.data(), cim.data(), p1.data(),
                      p2.data());
    for (std::size_t j = 0; j < n; ++j) {
      cd acc = 0.0;
      for (std::size_t i = 0; i < m; ++i)
        acc += cd(cre[i], cim[i]) * cd(are[i * n + j], aim[i * n + j]);
      CHECK(rel(p1[j], acc.real()) < 1e-12);
      CHECK(rel(p2[j], acc.imag()) < 1e-12);
    }

    const auto y = positive(m, r), w = positive(m, r);
    const auto ure = randn(m, r), uim = randn(m, r), gre = randn(m, r), gim = randn(m, r);
    std::vector<double> c1(m), c2(m);
    const double scale = 0.37;
    for (bool complex_u : {false, true}) {
      const double* ui = complex_u ? uim.data() : nullptr;
      const double s = t.gradient_coeffs(ure.data(), ui, y.data(), w.data(), m, scale,
                                         c1.data(), c2.data());
      double acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const cd u(ure[i], complex_u ? uim[i] : 0.0);
        const double res = std::norm(u) - y[i];
        acc += w[i] * res * res;
        const cd c = scale * w[i] * res * u;
        CHECK(rel(c1[i], c.real()) < 1e-12);
        if (complex_u) CHECK(rel(c2[i], c.imag()) < 1e-12);
      }
      CHECK(rel(s, acc) < 1e-12);

      const double tau = 0.3;
      const double* gi = complex_u ? gim.data() : nullptr;
      const double lo = t.line_objective(ure.data(), ui, gre.data(), gi, tau, y.data(), w.data(), m);
      acc = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const cd u(ure[i], complex_u ? uim[i] : 0.0);
        const cd g(gre[i], complex_u ? gim[i] : 0.0);
        const double res = std::norm(u - tau * g) - y[i];
        acc += w[i] * res * res;
      }
      CHECK(rel(lo, acc) < 1e-12);
    }
  }
}

}  // namespace

TEST_CASE("scalar kernels match the std::complex oracle") {
  check_against_oracle(kernels::scalar_table());
}

TEST_CASE("AVX2 kernels match the std::complex oracle") {
  const kernels::Table* t = kernels::avx2_table();
  if (t == nullptr) {
    MESSAGE("AVX2 kernels unavailable on this machine");
    return;
  }
  check_against_oracle(*t);
}

TEST_CASE("AVX2 and scalar kernels agree on many sizes") {
  const kernels::Table* v = kernels::avx2_table();
  if (v == nullptr) return;
  const kernels::Table& s = kernels::scalar_table();
  Rng r(5);
  for (std::size_t m = 1; m <= 37; m += 3) {
    for (std::size_t n = 1; n <= 21; n += 2) {
      const auto a = randn(m * n, r), b = randn(m * n, r);
      const auto z = randn(n, r), zi = randn(n, r), c = randn(m, r), ci = randn(m, r);
      std::vector<double> o1(m), o2(m), o3(m), o4(m);
      s.matvec_conj(a.data(), b.data(), m, n, z.data(), zi.data(), o1.data(), o2.data());
      v->matvec_conj(a.data(), b.data(), m, n, z.data(), zi.data(), o3.data(), o4.data());
      for (std::size_t i = 0; i < m; ++i) {
        CHECK(rel(o1[i], o3[i]) < 1e-12);
        CHECK(rel(o2[i], o4[i]) < 1e-12);
      }
      std::vector<double> p1(n), p2(n), p3(n), p4(n);
      s.adjoint_real(a.data(), m, n, c.data(), p1.data());
      v->adjoint_real(a.data(), m, n, c.data(), p3.data());
      for (std::size_t j = 0; j < n; ++j) CHECK(rel(p1[j], p3[j]) < 1e-12);
      s.adjoint_complex(a.data(), b.data(), m, n, c.data(), ci.data(), p1.data(), p2.data());
      v->adjoint_complex(a.data(), b.data(), m, n, c.data(), ci.data(), p3.data(), p4.data());
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(rel(p1[j], p3[j]) < 1e-12);
        CHECK(rel(p2[j], p4[j]) < 1e-12);
      }
    }
  }
}

TEST_CASE("active table is one of the known variants") {
  const auto& t = kernels::active();
  CHECK((t.name == kernels::scalar_table().name ||
         (kernels::avx2_table() && t.name == kernels::avx2_table()->name)));
}

TEST_CASE("PRWF_KERNELS=scalar forces the reference kernels") {
  const char* v = std::getenv("PRWF_KERNELS");
  if (v == nullptr || std::string_view(v) != "scalar") return;
  CHECK(kernels::active().name == kernels::scalar_table().name);
}
