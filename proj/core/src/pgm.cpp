#include "digitrec/pgm.hpp"

#include <cctype>
#include <fstream>
#include <iterator>
#include <ostream>
#include <string>

#include "digitrec/errors.hpp"

namespace digitrec {

namespace {

class PgmScanner {
 public:
  explicit PgmScanner(std::string_view bytes) : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal integer.
  int integer(const char* what) {
    skip_separators();
    if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(Errc::bad_image, std::string("expected ") + what);
    }
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L) throw Error(Errc::bad_image, std::string(what) + " too large");
      ++pos_;
    }
    return static_cast<int>(value);
  }

  // The single whitespace byte that separates the header from P5 raster data.
  void header_terminator() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw Error(Errc::bad_image, "missing whitespace after header");
    }
    ++pos_;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      const char ch = bytes_[pos_];
      if (ch == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(ch))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint8_t rescale(int sample, int maxval) {
  if (sample > maxval) throw Error(Errc::bad_image, "sample exceeds maxval");
  if (maxval == 255) return static_cast<std::uint8_t>(sample);
  return static_cast<std::uint8_t>((sample * 255 + maxval / 2) / maxval);
}

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw Error(Errc::bad_image, "not a P2/P5 graymap");
  }
  const bool ascii = bytes[1] == '2';
  PgmScanner scan(bytes.substr(2));
  const int width = scan.integer("width");
  const int height = scan.integer("height");
  const int maxval = scan.integer("maxval");
  if (width < 1 || height < 1) throw Error(Errc::bad_image, "image dimensions must be positive");
  if (maxval < 1 || maxval > 255) {
    throw Error(Errc::bad_image, "maxval " + std::to_string(maxval) + " outside 1..255");
  }

  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<std::uint8_t> pixels(count);
  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) pixels[i] = rescale(scan.integer("pixel sample"), maxval);
  } else {
    scan.header_terminator();
    const std::size_t offset = 2 + scan.position();
    if (bytes.size() - offset < count) throw Error(Errc::bad_image, "raster data truncated");
    for (std::size_t i = 0; i < count; ++i) {
      pixels[i] = rescale(static_cast<unsigned char>(bytes[offset + i]), maxval);
    }
  }
  return GrayImage(height, width, std::move(pixels));
}

GrayImage read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open " + path.string());
  const std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  try {
    return parse_pgm(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.message());
  }
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  const auto pixels = img.pixels();
  out.write(reinterpret_cast<const char*>(pixels.data()), static_cast<std::streamsize>(pixels.size()));
}

void write_pgm(const std::filesystem::path& path, const GrayImage& img) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write " + path.string());
  write_pgm(out, img);
}

GrayImage to_gray(const BinaryImage& img) {
  GrayImage out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) out.set(r, c, img.ink(r, c) ? 0 : 255);
  }
  return out;
}

}  // namespace digitrec
