#include "prwf/bench/ppm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <string>

#include "prwf/bench/errors.hpp"

namespace prwf::bench {

PpmImage::PpmImage(std::size_t w, std::size_t h) : width(w), height(h) {
  for (auto& c : channels) c.assign(w * h, 0);
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const noexcept { return pos_; }
  std::size_t token_start() const noexcept { return token_start_; }

  // Skips whitespace and '#' comments (which run to end of line).
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t read_uint(const char* what) {
    skip_separators();
    const std::size_t start = pos_;
    token_start_ = start;
    std::size_t value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > (std::size_t{1} << 31)) throw FormatError(std::string(what) + " too large", start);
      ++pos_;
    }
    if (pos_ == start) throw FormatError(std::string("expected ") + what, start);
    return value;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::size_t token_start_ = 0;
};

}  // namespace

PpmImage parse_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '6')
    throw FormatError("missing P6 magic", 0);
  HeaderReader r(bytes.subspan(2));
  const std::size_t w = r.read_uint("width");
  if (w == 0) throw FormatError("zero image width", 2 + r.token_start());
  const std::size_t h = r.read_uint("height");
  if (h == 0) throw FormatError("zero image height", 2 + r.token_start());
  const std::size_t maxval = r.read_uint("maxval");
  if (maxval != 255) throw FormatError("maxval must be 255", 2 + r.token_start());
  const std::size_t header_end = 2 + r.pos();
  if (header_end >= bytes.size() || !std::isspace(bytes[header_end]))
    throw FormatError("expected single whitespace after maxval", header_end);
  const std::size_t data = header_end + 1;
  const std::size_t need = 3 * w * h;
  if (bytes.size() - data < need) throw FormatError("truncated pixel data", bytes.size());
  if (bytes.size() - data > need) throw FormatError("trailing bytes after pixel data", data + need);
  PpmImage img(w, h);
  for (std::size_t p = 0; p < w * h; ++p)
    for (int c = 0; c < 3; ++c) img.channels[c][p] = bytes[data + 3 * p + c];
  return img;
}

std::vector<std::uint8_t> serialize_ppm(const PpmImage& img) {
  const std::string header =
      "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + 3 * img.pixels());
  for (std::size_t p = 0; p < img.pixels(); ++p)
    for (int c = 0; c < 3; ++c) out.push_back(img.channels[c][p]);
  return out;
}

PpmImage read_ppm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open image '" + path + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  return parse_ppm(bytes);
}

void write_ppm(const std::string& path, const PpmImage& img) {
  const auto bytes = serialize_ppm(img);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace prwf::bench
