#include "digitrec/imgproc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "digitrec/errors.hpp"

namespace digitrec {

namespace {

void check_dims(int height, int width) {
  if (height < 1 || width < 1) {
    throw Error(Errc::invalid_argument, "raster dimensions must be positive, got " +
                                            std::to_string(height) + "x" + std::to_string(width));
  }
}

bool is_ink(double intensity, int threshold, bool invert) {
  return invert ? intensity >= threshold : intensity < threshold;
}

}  // namespace

template <class Pixel>
Raster<Pixel>::Raster(int height, int width, Pixel fill) : height_(height), width_(width) {
  check_dims(height, width);
  pixels_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill);
}

template <class Pixel>
Raster<Pixel>::Raster(int height, int width, std::vector<Pixel> pixels)
    : height_(height), width_(width), pixels_(std::move(pixels)) {
  check_dims(height, width);
  if (pixels_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width)) {
    throw Error(Errc::invalid_argument, "pixel count " + std::to_string(pixels_.size()) +
                                            " does not match " + std::to_string(height) + "x" +
                                            std::to_string(width));
  }
}

template class Raster<std::uint8_t>;

BinaryImage::BinaryImage(int height, int width, bool fill)
    : Raster(height, width, fill ? std::uint8_t{1} : std::uint8_t{0}) {}

BinaryImage::BinaryImage(int height, int width, std::vector<std::uint8_t> bits)
    : Raster(height, width, std::move(bits)) {
  if (std::any_of(pixels_.begin(), pixels_.end(), [](std::uint8_t b) { return b > 1; })) {
    throw Error(Errc::invalid_argument, "binary image pixels must be 0 or 1");
  }
}

std::size_t BinaryImage::foreground_count() const noexcept {
  return static_cast<std::size_t>(std::count(pixels_.begin(), pixels_.end(), std::uint8_t{1}));
}

BinaryImage binarize(const GrayImage& img, int threshold, bool invert) {
  BinaryImage out(img.height(), img.width());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      out.set(r, c, is_ink(img(r, c), threshold, invert));
    }
  }
  return out;
}

BoundingBox minimal_bounding_box(const BinaryImage& img) {
  BoundingBox box{img.height(), -1, img.width(), -1};
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      if (!img.ink(r, c)) continue;
      box.row_min = std::min(box.row_min, r);
      box.row_max = std::max(box.row_max, r);
      box.col_min = std::min(box.col_min, c);
      box.col_max = std::max(box.col_max, c);
    }
  }
  if (box.row_max < 0) throw Error(Errc::no_foreground, "image contains no foreground pixel");
  return box;
}

GrayImage crop(const GrayImage& img, const BoundingBox& box) {
  if (box.row_min < 0 || box.col_min < 0 || box.row_max >= img.height() ||
      box.col_max >= img.width() || box.row_min > box.row_max || box.col_min > box.col_max) {
    throw Error(Errc::invalid_argument, "bounding box outside image");
  }
  GrayImage out(box.height(), box.width());
  for (int r = 0; r < out.height(); ++r) {
    for (int c = 0; c < out.width(); ++c) out.set(r, c, img(box.row_min + r, box.col_min + c));
  }
  return out;
}

std::vector<double> resample_bilinear(const GrayImage& img, int out_height, int out_width) {
  check_dims(out_height, out_width);
  // Source coordinate of output index i along an axis of src_n -> dst_n samples.
  auto source_coord = [](int i, int src_n, int dst_n) {
    if (dst_n == 1 || src_n == 1) return 0.0;
    return static_cast<double>(i) * static_cast<double>(src_n - 1) / static_cast<double>(dst_n - 1);
  };

  std::vector<double> out(static_cast<std::size_t>(out_height) * static_cast<std::size_t>(out_width));
  for (int y = 0; y < out_height; ++y) {
    const double sy = source_coord(y, img.height(), out_height);
    const int y0 = std::min(static_cast<int>(std::floor(sy)), img.height() - 1);
    const int y1 = std::min(y0 + 1, img.height() - 1);
    const double fy = sy - y0;
    for (int x = 0; x < out_width; ++x) {
      const double sx = source_coord(x, img.width(), out_width);
      const int x0 = std::min(static_cast<int>(std::floor(sx)), img.width() - 1);
      const int x1 = std::min(x0 + 1, img.width() - 1);
      const double fx = sx - x0;
      const double top = (1.0 - fx) * img(y0, x0) + fx * img(y0, x1);
      const double bottom = (1.0 - fx) * img(y1, x0) + fx * img(y1, x1);
      out[static_cast<std::size_t>(y) * out_width + x] = (1.0 - fy) * top + fy * bottom;
    }
  }
  return out;
}

int otsu_threshold(const GrayImage& img) {
  std::array<double, 256> hist{};
  for (std::uint8_t p : img.pixels()) hist[p] += 1.0;
  const double total = static_cast<double>(img.size());

  double sum_all = 0.0;
  for (int i = 0; i < 256; ++i) sum_all += i * hist[i];

  double weight_low = 0.0;
  double sum_low = 0.0;
  double best_var = -1.0;
  int best_split = 0;
  for (int t = 0; t < 256; ++t) {
    weight_low += hist[t];
    if (weight_low == 0.0) continue;
    const double weight_high = total - weight_low;
    if (weight_high == 0.0) break;
    sum_low += t * hist[t];
    const double mean_low = sum_low / weight_low;
    const double mean_high = (sum_all - sum_low) / weight_high;
    const double between = weight_low * weight_high * (mean_low - mean_high) * (mean_low - mean_high);
    if (between > best_var) {
      best_var = between;
      best_split = t;
    }
  }
  return best_split + 1;
}

BinaryImage normalize_image(const GrayImage& img, int threshold, bool invert) {
  const BoundingBox box = minimal_bounding_box(binarize(img, threshold, invert));
  const GrayImage cropped = crop(img, box);
  const std::vector<double> scaled = resample_bilinear(cropped, kCanonicalSize, kCanonicalSize);

  BinaryImage out(kCanonicalSize, kCanonicalSize);
  for (int r = 0; r < kCanonicalSize; ++r) {
    for (int c = 0; c < kCanonicalSize; ++c) {
      out.set(r, c, is_ink(scaled[static_cast<std::size_t>(r) * kCanonicalSize + c], threshold, invert));
    }
  }
  return out;
}

BinaryImage normalize_image(const GrayImage& img, const ThresholdOptions& options) {
  const int threshold = options.use_otsu ? otsu_threshold(img) : options.threshold;
  return normalize_image(img, threshold, options.invert);
}

}  // namespace digitrec
