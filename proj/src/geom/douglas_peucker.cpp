#include "roadgen/geom/douglas_peucker.hpp"

#include <utility>
#include <vector>

#include "roadgen/errors.hpp"

namespace roadgen::geom {

namespace {

void simplify_range(const std::vector<Point2>& pts, std::size_t lo, std::size_t hi, double eps,
                    std::vector<bool>& keep) {
  if (hi <= lo + 1) return;
  double max_dev = -1.0;
  std::size_t split = lo;
  for (std::size_t i = lo + 1; i < hi; ++i) {
    double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
    if (d > max_dev) {  // leftmost maximum wins on ties
      max_dev = d;
      split = i;
    }
  }
  if (max_dev > eps) {
    keep[split] = true;
    simplify_range(pts, lo, split, eps, keep);
    simplify_range(pts, split, hi, eps, keep);
  }
}

}  // namespace

Polyline douglas_peucker(const Polyline& poly, double eps) {
  if (eps < 0.0) raise(errc::invalid_params, "douglas_peucker eps must be >= 0");
  const auto& pts = poly.points();
  if (pts.size() <= 2) return poly;

  std::vector<bool> keep(pts.size(), false);
  keep.front() = keep.back() = true;
  simplify_range(pts, 0, pts.size() - 1, eps, keep);

  std::vector<Point2> out;
  out.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (keep[i]) out.push_back(pts[i]);
  }
  return Polyline(std::move(out));
}

}  // namespace roadgen::geom
