#include <cmath>
#include <cstdlib>
#include <string>

#include "digitrec/errors.hpp"
#include "digitrec/eval.hpp"
#include "digitrec/random.hpp"

namespace digitrec {

namespace {

constexpr int kMaxJitter = 2;

bool in_range(int v, int lo, int hi) { return v >= lo && v <= hi; }

bool vertical_bar(int r, int c) { return in_range(c, 14, 17) && in_range(r, 4, 27); }
bool down_diagonal(int r, int c) { return std::abs(r - c) <= 2 && in_range(r, 4, 27) && in_range(c, 4, 27); }
bool up_diagonal(int r, int c) { return std::abs(r + c - 31) <= 2 && in_range(r, 4, 27) && in_range(c, 4, 27); }

double radius(int r, int c) { return std::hypot(r - 15.5, c - 15.5); }

// Glyph membership in unshifted canvas coordinates.
bool glyph_ink(int label, int r, int c) {
  switch (label) {
    case 0:
      return in_range(r, 4, 27) && in_range(c, 8, 23) && !(in_range(r, 8, 23) && in_range(c, 12, 19));
    case 1:
      return vertical_bar(r, c) || (in_range(r, 24, 27) && in_range(c, 9, 22)) ||
             (std::abs(r + c - 21) <= 1 && in_range(r, 4, 10) && in_range(c, 9, 17));
    case 2: return down_diagonal(r, c);
    case 3: return up_diagonal(r, c);
    case 4: return radius(r, c) >= 7.0 && radius(r, c) <= 11.0;
    case 5:
      return (in_range(c, 14, 17) && in_range(r, 6, 25)) || (in_range(r, 14, 17) && in_range(c, 6, 25));
    case 6:
      return (in_range(c, 6, 9) && in_range(r, 4, 27)) || (in_range(r, 24, 27) && in_range(c, 6, 25));
    case 7: return (in_range(r, 4, 7) && in_range(c, 4, 27)) || vertical_bar(r, c);
    case 8: return radius(r, c) <= 10.0;
    case 9:
      return (in_range(r, 4, 7) && in_range(c, 4, 27)) || (in_range(r, 24, 27) && in_range(c, 4, 27)) ||
             up_diagonal(r, c);
    default: break;
  }
  throw Error(Errc::label_out_of_range, "no glyph for label " + std::to_string(label));
}

}  // namespace

BinaryImage render_glyph(int label, int row_shift, int col_shift) {
  if (label < 0 || label >= kClassCount) {
    throw Error(Errc::label_out_of_range, "no glyph for label " + std::to_string(label));
  }
  BinaryImage img(kCanonicalSize, kCanonicalSize);
  for (int r = 0; r < kCanonicalSize; ++r) {
    for (int c = 0; c < kCanonicalSize; ++c) img.set(r, c, glyph_ink(label, r - row_shift, c - col_shift));
  }
  return img;
}

std::vector<ToyImage> make_toy_images(int per_class, double noise, std::uint64_t seed) {
  if (per_class < 1) throw Error(Errc::invalid_argument, "per_class must be at least 1");
  if (!(noise >= 0.0 && noise < 1.0)) throw Error(Errc::invalid_argument, "noise must be in [0, 1)");

  Rng rng(seed);
  std::vector<ToyImage> out;
  out.reserve(static_cast<std::size_t>(per_class) * kClassCount);
  for (int label = 0; label < kClassCount; ++label) {
    for (int i = 0; i < per_class; ++i) {
      const int dy = rng.between(-kMaxJitter, kMaxJitter);
      const int dx = rng.between(-kMaxJitter, kMaxJitter);
      BinaryImage img = render_glyph(label, dy, dx);
      for (int r = 0; r < kCanonicalSize; ++r) {
        for (int c = 0; c < kCanonicalSize; ++c) {
          if (rng.uniform01() < noise) img.set(r, c, !img.ink(r, c));
        }
      }
      out.push_back(ToyImage{label, std::move(img), "toy:" + std::to_string(label) + ":" + std::to_string(i)});
    }
  }
  return out;
}

Dataset make_toy_dataset(int per_class, double noise, std::uint64_t seed) {
  Dataset data;
  for (ToyImage& toy : make_toy_images(per_class, noise, seed)) {
    data.add(make_sample(extract_features(toy.image), toy.label), std::move(toy.tag));
  }
  return data;
}

}  // namespace digitrec
