#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace prwf {

enum class FftDirection { forward, inverse };

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

/// Iterative radix-2 decimation-in-time transform over split real/imaginary
/// planes. The forward transform is unnormalized,
///   X[k] = sum_t x[t] exp(-2 pi j k t / n),
/// and the inverse carries the 1/n factor unless `scale_inverse` is false.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  void execute(std::span<double> re, std::span<double> im, FftDirection dir,
               bool scale_inverse = true) const;

 private:
  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<double> cos_;  // cos(2 pi k / n), k < n/2
  std::vector<double> sin_;  // sin(2 pi k / n), k < n/2
};

/// Out-of-place convenience wrapper; throws ParameterError on non power of
/// two lengths.
std::vector<std::complex<double>> fft(std::span<const std::complex<double>> v,
                                      FftDirection dir);

}  // namespace prwf
