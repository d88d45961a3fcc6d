#include "prwf/fft.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "prwf/errors.hpp"

namespace prwf {

bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

std::size_t next_power_of_two(std::size_t n) noexcept {
  return n <= 1 ? 1 : std::bit_ceil(n);
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n))
    throw ParameterError("FFT length " + std::to_string(n) + " is not a power of two");
  const int bits = std::countr_zero(n);
  bitrev_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (int b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
    bitrev_[i] = r;
  }
  cos_.resize(n / 2);
  sin_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    cos_[k] = std::cos(angle);
    sin_[k] = std::sin(angle);
  }
}

void FftPlan::execute(std::span<double> re, std::span<double> im, FftDirection dir,
                      bool scale_inverse) const {
  if (re.size() != n_ || im.size() != n_) throw ParameterError("FFT buffer length mismatch");
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (j > i) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  // forward: w = exp(-2 pi j k / len), inverse: exp(+2 pi j k / len)
  const double sign = dir == FftDirection::forward ? -1.0 : 1.0;
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const double wr = cos_[k * stride];
        const double wi = sign * sin_[k * stride];
        const std::size_t a = start + k;
        const std::size_t b = a + half;
        const double tr = re[b] * wr - im[b] * wi;
        const double ti = re[b] * wi + im[b] * wr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
      }
    }
  }
  if (dir == FftDirection::inverse && scale_inverse) {
    const double s = 1.0 / static_cast<double>(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      re[i] *= s;
      im[i] *= s;
    }
  }
}

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> v,
                                      FftDirection dir) {
  const FftPlan plan(v.size());
  std::vector<double> re(v.size()), im(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    re[i] = v[i].real();
    im[i] = v[i].imag();
  }
  plan.execute(re, im, dir);
  std::vector<std::complex<double>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = {re[i], im[i]};
  return out;
}

}  // namespace prwf
