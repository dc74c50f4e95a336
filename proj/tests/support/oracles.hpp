#pragma once

// Independent reference implementations used to check the library against;
// nothing here may call the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "roadgen/geom/types.hpp"

namespace oracles {

using roadgen::geom::Point2;

// Deterministic uniform double in [lo, hi); avoids std::uniform_real_distribution
// whose output is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  int uniform_int(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

private:
  std::uint64_t state_;
};

inline double seg_distance(const Point2& p, const Point2& a, const Point2& b) {
  Point2 ab = b - a;
  double len2 = ab.x * ab.x + ab.y * ab.y;
  if (len2 <= 0.0) return roadgen::geom::distance(p, a);
  double t = std::clamp(((p - a).x * ab.x + (p - a).y * ab.y) / len2, 0.0, 1.0);
  return roadgen::geom::distance(p, a + ab * t);
}

// Exhaustive recursive Douglas-Peucker over the raw point vector.
inline void dp_recurse(const std::vector<Point2>& pts, std::size_t lo, std::size_t hi, double eps,
                       std::vector<bool>& keep) {
  if (hi <= lo + 1) return;
  double max_dev = -1.0;
  std::size_t arg = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    double d = seg_distance(pts[i], pts[lo], pts[hi]);
    if (d > max_dev) {
      max_dev = d;
      arg = i;
    }
  }
  if (max_dev > eps) {
    keep[arg] = true;
    dp_recurse(pts, lo, arg, eps, keep);
    dp_recurse(pts, arg, hi, eps, keep);
  }
}

inline std::vector<Point2> douglas_peucker_reference(const std::vector<Point2>& pts, double eps) {
  if (pts.size() <= 2) return pts;
  std::vector<bool> keep(pts.size(), false);
  keep.front() = keep.back() = true;
  dp_recurse(pts, 0, pts.size() - 1, eps, keep);
  std::vector<Point2> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) out.push_back(pts[i]);
  }
  return out;
}

// Minimum distance from p to the piecewise-linear interpolation of densely
// sampled curve points (plain nearest-sample distance would add half the
// sample spacing as measurement error).
inline double min_distance_to_samples(const Point2& p, const std::vector<Point2>& samples) {
  double best = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    best = std::min(best, seg_distance(p, samples[i], samples[i + 1]));
  }
  return best;
}

// One-sided Hausdorff distance from the points of A to the chain of B.
inline double hausdorff(const std::vector<Point2>& a, const std::vector<Point2>& b) {
  double worst = 0.0;
  for (const auto& p : a) worst = std::max(worst, min_distance_to_samples(p, b));
  return worst;
}

}  // namespace oracles
