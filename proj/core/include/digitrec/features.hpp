#pragma once

#include <array>
#include <compare>

#include "digitrec/imgproc.hpp"

namespace digitrec {

inline constexpr int kShadowCount = 24;
inline constexpr int kCentroidCount = 16;
inline constexpr int kLongestRunCount = 36;
inline constexpr int kFeatureCount = kShadowCount + kCentroidCount + kLongestRunCount;

// Layout: [shadow 0..23 | centroid 24..39 | longest run 40..75], all in [0, 1].
using FeatureVector = std::array<double, kFeatureCount>;

// One of the eight triangles cut from the 32x32 square by its two center
// lines and two diagonals. Index 0 lies between the east center line and the
// NE diagonal; indices increase counter-clockwise.
struct Octant {
  int index = 0;

  friend auto operator<=>(const Octant&, const Octant&) = default;
};

// Classifies pixel (row, col) of a 32x32 raster by the angle of its center
// (row + 0.5, col + 0.5) around (16, 16). Pixels whose centers lie on a
// diagonal are split between the two neighbouring octants: with i the
// distance index floor(|dx|) in 0..15, the pixel goes to the
// counter-clockwise neighbour when i % 4 is 0 or 3, otherwise to the
// clockwise one. Every octant receives exactly 128 pixels and the labeling
// commutes with 180 degree rotation (k -> k + 4).
// Throws Errc::invalid_argument for coordinates outside 0..31.
Octant octant_of(int row, int col);

// For each octant, the foreground pixels are projected orthogonally onto the
// octant's three sides in the order (perimeter half-edge, center line,
// diagonal). Each side is split into 16 cells; the feature is the number of
// cells hit divided by the number of cells a completely inked octant hits
// on that side (16, or 15 where a diagonal pixel was given to the neighbour).
std::array<double, kShadowCount> shadow_features(const BinaryImage& img);

// Number of cells of (octant, side) reachable by that octant's pixels.
int shadow_capacity(Octant octant, int side);

// (mean row / 31, mean col / 31) per octant, octant order; empty octants give (0, 0).
std::array<double, kCentroidCount> centroid_features(const BinaryImage& img);

// A rectangular sub-window of an image.
struct Region {
  int row0 = 0;
  int col0 = 0;
  int height = 0;
  int width = 0;
};

// The nine overlapping half-size regions with top-left corners at
// {0, h/4, 2h/4} x {0, w/4, 2w/4}, row-major.
std::array<Region, 9> longest_run_regions(int height, int width);

enum RunDirection { kRowRuns = 0, kColumnRuns = 1, kDownDiagonalRuns = 2, kUpDiagonalRuns = 3 };

// Raw (unnormalized) longest-run sums for one region, indexed by
// RunDirection: rows, columns, NW-SE diagonals, NE-SW diagonals. For every
// line in the given direction that meets the region, adds the length of the
// longest run of ink in the full image line that has at least one pixel in
// the region.
std::array<int, 4> longest_run_sums(const BinaryImage& img, const Region& region);

// All 9 x 4 sums divided by height * width. Works for any raster; the
// canonical case is 32x32.
std::array<double, kLongestRunCount> longest_run_features(const BinaryImage& img);

// Concatenation of the three families for a 32x32 binary image.
FeatureVector extract_features(const BinaryImage& img);

}  // namespace digitrec
