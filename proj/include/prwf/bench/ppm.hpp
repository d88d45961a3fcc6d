#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace prwf::bench {

/// 8-bit RGB image held as three row-major planes.
struct PpmImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::array<std::vector<std::uint8_t>, 3> channels;

  PpmImage() = default;
  PpmImage(std::size_t w, std::size_t h);
  std::size_t pixels() const noexcept { return width * height; }
};

/// Parses binary P6 with maxval 255. Header comments are skipped and not
/// retained. Throws FormatError with the offending byte offset.
PpmImage parse_ppm(std::span<const std::uint8_t> bytes);
/// Serializes as "P6\n<w> <h>\n255\n" followed by interleaved RGB bytes.
std::vector<std::uint8_t> serialize_ppm(const PpmImage& img);

PpmImage read_ppm(const std::string& path);
void write_ppm(const std::string& path, const PpmImage& img);

}  // namespace prwf::bench
