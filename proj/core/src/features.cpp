#include "digitrec/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "digitrec/errors.hpp"

namespace digitrec {

namespace {

constexpr int kSize = kCanonicalSize;
constexpr int kCells = 16;
constexpr int kSidesPerOctant = 3;

void require_canonical(const BinaryImage& img) {
  if (img.height() != kSize || img.width() != kSize) {
    throw Error(Errc::invalid_argument, "feature extraction expects a 32x32 image, got " +
                                            std::to_string(img.height()) + "x" +
                                            std::to_string(img.width()));
  }
}

struct Point {
  double x;  // column axis
  double y;  // row axis, growing downwards
};

struct Segment {
  Point from;
  Point to;
};

// Triangle sides per octant in feature order: perimeter half-edge (edge
// midpoint to corner), center line (center to edge midpoint), diagonal
// (center to corner).
std::array<std::array<Segment, kSidesPerOctant>, 8> octant_sides() {
  constexpr Point center{16, 16};
  constexpr Point east{32, 16}, north{16, 0}, west{0, 16}, south{16, 32};
  constexpr Point ne{32, 0}, nw{0, 0}, sw{0, 32}, se{32, 32};
  constexpr std::array<std::pair<Point, Point>, 8> mid_corner{{
      {east, ne}, {north, ne}, {north, nw}, {west, nw},
      {west, sw}, {south, sw}, {south, se}, {east, se},
  }};
  std::array<std::array<Segment, kSidesPerOctant>, 8> sides{};
  for (int k = 0; k < 8; ++k) {
    const auto [mid, corner] = mid_corner[k];
    sides[k] = {Segment{mid, corner}, Segment{center, mid}, Segment{center, corner}};
  }
  return sides;
}

int projected_cell(Point p, const Segment& side) {
  const double vx = side.to.x - side.from.x;
  const double vy = side.to.y - side.from.y;
  const double t = ((p.x - side.from.x) * vx + (p.y - side.from.y) * vy) / (vx * vx + vy * vy);
  return std::clamp(static_cast<int>(std::floor(kCells * t)), 0, kCells - 1);
}

// Per-pixel octant and projected cells, plus per-side capacity, computed once.
struct OctantTables {
  std::array<int, kSize * kSize> octant{};
  std::array<std::array<int, kSidesPerOctant>, kSize * kSize> cell{};
  std::array<std::array<int, kSidesPerOctant>, 8> capacity{};
};

int classify(int row, int col) {
  // Doubled offsets of the pixel center from (16, 16); always odd, never 0.
  const int dx = 2 * col - 31;
  const int dy = 31 - 2 * row;
  const int ax = std::abs(dx);
  const int ay = std::abs(dy);

  int first;  // clockwise-most octant of the quadrant
  if (dx > 0 && dy > 0) first = 0;
  else if (dx < 0 && dy > 0) first = 2;
  else if (dx < 0) first = 4;
  else first = 6;

  if (ax == ay) {
    const int i = (ax - 1) / 2;
    return (i % 4 == 0 || i % 4 == 3) ? first + 1 : first;
  }
  // Octants 0 and 4 start on the horizontal center line, 2 and 6 on the vertical one.
  const bool starts_horizontal = first == 0 || first == 4;
  const bool near_start = starts_horizontal ? ax > ay : ay > ax;
  return near_start ? first : first + 1;
}

const OctantTables& tables() {
  static const OctantTables built = [] {
    OctantTables t;
    const auto sides = octant_sides();
    std::array<std::array<std::array<bool, kCells>, kSidesPerOctant>, 8> reachable{};
    for (int r = 0; r < kSize; ++r) {
      for (int c = 0; c < kSize; ++c) {
        const int idx = r * kSize + c;
        const int k = classify(r, c);
        t.octant[idx] = k;
        const Point center{c + 0.5, r + 0.5};
        for (int s = 0; s < kSidesPerOctant; ++s) {
          t.cell[idx][s] = projected_cell(center, sides[k][s]);
          reachable[k][s][t.cell[idx][s]] = true;
        }
      }
    }
    for (int k = 0; k < 8; ++k) {
      for (int s = 0; s < kSidesPerOctant; ++s) {
        t.capacity[k][s] = static_cast<int>(std::count(reachable[k][s].begin(), reachable[k][s].end(), true));
      }
    }
    return t;
  }();
  return built;
}

// Length of the maximal ink run through each pixel along (dr, dc); 0 on paper.
std::vector<int> run_lengths(const BinaryImage& img, int dr, int dc) {
  const int h = img.height();
  const int w = img.width();
  std::vector<int> len(static_cast<std::size_t>(h) * static_cast<std::size_t>(w), 0);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      if (!img.ink(r, c)) continue;
      // Only start from the first pixel of a run.
      if (img.contains(r - dr, c - dc) && img.ink(r - dr, c - dc)) continue;
      int n = 0;
      while (img.contains(r + n * dr, c + n * dc) && img.ink(r + n * dr, c + n * dc)) ++n;
      for (int i = 0; i < n; ++i) {
        len[static_cast<std::size_t>(r + i * dr) * w + (c + i * dc)] = n;
      }
    }
  }
  return len;
}

// Sum over lines of direction d meeting the region of the longest run
// touching the region. line_of maps a pixel to a 0-based line id.
template <class LineOf>
int region_sum(const std::vector<int>& len, int width, const Region& region, int line_count,
               LineOf line_of) {
  std::vector<int> best(static_cast<std::size_t>(line_count), 0);
  for (int r = region.row0; r < region.row0 + region.height; ++r) {
    for (int c = region.col0; c < region.col0 + region.width; ++c) {
      int& slot = best[static_cast<std::size_t>(line_of(r, c))];
      slot = std::max(slot, len[static_cast<std::size_t>(r) * width + c]);
    }
  }
  int sum = 0;
  for (int v : best) sum += v;
  return sum;
}

std::array<int, 4> run_sums(const std::array<std::vector<int>, 4>& len, int width,
                            const Region& g) {
  const int diagonals = g.height + g.width - 1;
  return {
      region_sum(len[kRowRuns], width, g, g.height, [&](int r, int) { return r - g.row0; }),
      region_sum(len[kColumnRuns], width, g, g.width, [&](int, int c) { return c - g.col0; }),
      region_sum(len[kDownDiagonalRuns], width, g, diagonals,
                 [&](int r, int c) { return (c - g.col0) - (r - g.row0) + g.height - 1; }),
      region_sum(len[kUpDiagonalRuns], width, g, diagonals,
                 [&](int r, int c) { return (r - g.row0) + (c - g.col0); }),
  };
}

std::array<std::vector<int>, 4> all_run_lengths(const BinaryImage& img) {
  return {run_lengths(img, 0, 1), run_lengths(img, 1, 0), run_lengths(img, 1, 1),
          run_lengths(img, 1, -1)};
}

}  // namespace

Octant octant_of(int row, int col) {
  if (row < 0 || row >= kSize || col < 0 || col >= kSize) {
    throw Error(Errc::invalid_argument, "pixel (" + std::to_string(row) + ", " +
                                            std::to_string(col) + ") outside 32x32 raster");
  }
  return Octant{tables().octant[row * kSize + col]};
}

int shadow_capacity(Octant octant, int side) {
  if (octant.index < 0 || octant.index >= 8 || side < 0 || side >= kSidesPerOctant) {
    throw Error(Errc::invalid_argument, "no such octant side");
  }
  return tables().capacity[octant.index][side];
}

std::array<double, kShadowCount> shadow_features(const BinaryImage& img) {
  require_canonical(img);
  const OctantTables& t = tables();
  std::array<std::array<std::array<bool, kCells>, kSidesPerOctant>, 8> hit{};
  for (int idx = 0; idx < kSize * kSize; ++idx) {
    if (img.pixels()[idx] == 0) continue;
    for (int s = 0; s < kSidesPerOctant; ++s) hit[t.octant[idx]][s][t.cell[idx][s]] = true;
  }

  std::array<double, kShadowCount> out{};
  for (int k = 0; k < 8; ++k) {
    for (int s = 0; s < kSidesPerOctant; ++s) {
      const auto covered = std::count(hit[k][s].begin(), hit[k][s].end(), true);
      out[k * kSidesPerOctant + s] = static_cast<double>(covered) / t.capacity[k][s];
    }
  }
  return out;
}

std::array<double, kCentroidCount> centroid_features(const BinaryImage& img) {
  require_canonical(img);
  const OctantTables& t = tables();
  std::array<long, 8> count{}, row_sum{}, col_sum{};
  for (int r = 0; r < kSize; ++r) {
    for (int c = 0; c < kSize; ++c) {
      if (!img.ink(r, c)) continue;
      const int k = t.octant[r * kSize + c];
      ++count[k];
      row_sum[k] += r;
      col_sum[k] += c;
    }
  }
  std::array<double, kCentroidCount> out{};
  constexpr double kMaxIndex = kSize - 1;
  for (int k = 0; k < 8; ++k) {
    if (count[k] == 0) continue;
    out[2 * k] = static_cast<double>(row_sum[k]) / static_cast<double>(count[k]) / kMaxIndex;
    out[2 * k + 1] = static_cast<double>(col_sum[k]) / static_cast<double>(count[k]) / kMaxIndex;
  }
  return out;
}

std::array<Region, 9> longest_run_regions(int height, int width) {
  if (height < 2 || width < 2) throw Error(Errc::invalid_argument, "image too small for regions");
  std::array<Region, 9> regions{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      regions[i * 3 + j] = Region{i * height / 4, j * width / 4, height / 2, width / 2};
    }
  }
  return regions;
}

std::array<int, 4> longest_run_sums(const BinaryImage& img, const Region& region) {
  if (region.height < 1 || region.width < 1 || region.row0 < 0 || region.col0 < 0 ||
      region.row0 + region.height > img.height() || region.col0 + region.width > img.width()) {
    throw Error(Errc::invalid_argument, "region outside image");
  }
  return run_sums(all_run_lengths(img), img.width(), region);
}

std::array<double, kLongestRunCount> longest_run_features(const BinaryImage& img) {
  const auto len = all_run_lengths(img);
  const double area = static_cast<double>(img.height()) * img.width();
  std::array<double, kLongestRunCount> out{};
  const auto regions = longest_run_regions(img.height(), img.width());
  for (std::size_t g = 0; g < regions.size(); ++g) {
    const auto sums = run_sums(len, img.width(), regions[g]);
    for (int d = 0; d < 4; ++d) out[g * 4 + d] = sums[d] / area;
  }
  return out;
}

FeatureVector extract_features(const BinaryImage& img) {
  require_canonical(img);
  FeatureVector v{};
  const auto shadow = shadow_features(img);
  const auto centroid = centroid_features(img);
  const auto runs = longest_run_features(img);
  auto it = std::copy(shadow.begin(), shadow.end(), v.begin());
  it = std::copy(centroid.begin(), centroid.end(), it);
  std::copy(runs.begin(), runs.end(), it);
  return v;
}

}  // namespace digitrec
