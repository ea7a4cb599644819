#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace digitrec {

inline constexpr int kCanonicalSize = 32;
inline constexpr int kDefaultThreshold = 128;

// Row-major raster with checked dimensions (height, width >= 1).
template <class Pixel>
class Raster {
 public:
  Raster(int height, int width, Pixel fill = Pixel{});
  Raster(int height, int width, std::vector<Pixel> pixels);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return pixels_.size(); }

  bool contains(int row, int col) const noexcept {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  Pixel operator()(int row, int col) const { return pixels_[index(row, col)]; }

  std::span<const Pixel> pixels() const noexcept { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 protected:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(col);
  }

  int height_;
  int width_;
  std::vector<Pixel> pixels_;
};

// Intensities in [0, 255]; 0 is darkest.
class GrayImage : public Raster<std::uint8_t> {
 public:
  using Raster::Raster;

  void set(int row, int col, std::uint8_t value) { pixels_[index(row, col)] = value; }
};

// 1 marks foreground (ink), 0 background.
class BinaryImage : public Raster<std::uint8_t> {
 public:
  BinaryImage(int height, int width, bool fill = false);
  // Throws Errc::invalid_argument if any value is not 0 or 1.
  BinaryImage(int height, int width, std::vector<std::uint8_t> bits);

  bool ink(int row, int col) const { return (*this)(row, col) != 0; }
  void set(int row, int col, bool ink) { pixels_[index(row, col)] = ink ? 1 : 0; }

  std::size_t foreground_count() const noexcept;
};

struct BoundingBox {
  int row_min = 0;
  int row_max = 0;
  int col_min = 0;
  int col_max = 0;

  int height() const noexcept { return row_max - row_min + 1; }
  int width() const noexcept { return col_max - col_min + 1; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

// How a gray scan is split into ink and paper. With invert == false a pixel
// is ink iff intensity < threshold; with invert == true iff intensity >= threshold.
// use_otsu replaces threshold with otsu_threshold() of the image being normalized.
struct ThresholdOptions {
  int threshold = kDefaultThreshold;
  bool invert = false;
  bool use_otsu = false;
};

BinaryImage binarize(const GrayImage& img, int threshold, bool invert);

// Throws Errc::no_foreground on a blank image.
BoundingBox minimal_bounding_box(const BinaryImage& img);

GrayImage crop(const GrayImage& img, const BoundingBox& box);

// Bilinear resampling with corner-aligned sample positions:
// output (y, x) samples the source at (y * (H - 1) / (h - 1), x * (W - 1) / (w - 1)).
// Returns unrounded row-major intensities.
std::vector<double> resample_bilinear(const GrayImage& img, int out_height, int out_width);

// Otsu's method on the 256-bin histogram. Returned as a threshold for the
// strict-< ink rule, so levels up to and including Otsu's split are ink.
int otsu_threshold(const GrayImage& img);

// Canonical 32x32 form: binarize, crop the gray scan to the ink's minimal
// box, bilinearly stretch the crop to 32x32, binarize again with the same
// threshold. Throws Errc::no_foreground when no pixel is ink.
BinaryImage normalize_image(const GrayImage& img, int threshold, bool invert);
BinaryImage normalize_image(const GrayImage& img, const ThresholdOptions& options);

extern template class Raster<std::uint8_t>;

}  // namespace digitrec
