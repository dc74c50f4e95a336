#pragma once

#include <algorithm>
#include <vector>

#include "roadgen/geom/types.hpp"

namespace roadgen::geom {

// Signed area, positive for counterclockwise loops (y-up convention).
inline double signed_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0, n = poly.size(); i < n; ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % n];
    a += cross(p, q);
  }
  return 0.5 * a;
}

inline Point2 centroid(const std::vector<Point2>& pts) {
  Point2 c{0.0, 0.0};
  for (const auto& p : pts) c += p;
  return pts.empty() ? c : c / static_cast<double>(pts.size());
}

// Convexity for a clockwise loop: every consecutive edge pair turns the same
// way. Near-zero cross products (collinear vertices) are tolerated.
inline bool is_convex_clockwise(const std::vector<Point2>& poly, double rel_tol = 1e-9) {
  std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    Point2 e1 = poly[(i + 1) % n] - poly[i];
    Point2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
    double c = cross(e1, e2);
    double tol = rel_tol * norm(e1) * norm(e2);
    if (c > tol) return false;
  }
  return signed_area(poly) < 0.0;
}

// Crossing-number point-in-polygon test; boundary points count as inside.
inline bool point_in_polygon(const Point2& p, const std::vector<Point2>& poly) {
  bool inside = false;
  std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[j];
    const Point2& b = poly[i];
    if (point_segment_distance(p, a, b) <= 1e-12) return true;
    bool crosses = (b.y > p.y) != (a.y > p.y);
    if (crosses) {
      double x = b.x + (p.y - b.y) * (a.x - b.x) / (a.y - b.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

// Sorts points clockwise around `center` (descending angle, y-up); equal
// angles break ties by distance then coordinates for determinism.
inline std::vector<Point2> sort_clockwise(std::vector<Point2> pts, const Point2& center) {
  std::sort(pts.begin(), pts.end(), [&](const Point2& a, const Point2& b) {
    double aa = std::atan2(a.y - center.y, a.x - center.x);
    double ab = std::atan2(b.y - center.y, b.x - center.x);
    if (aa != ab) return aa > ab;
    double da = norm_sq(a - center), db = norm_sq(b - center);
    if (da != db) return da < db;
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
  });
  return pts;
}

// Proper-intersection test for segments [a,b] and [c,d]; returns parameters
// along both segments when they cross.
struct SegIntersection {
  bool hit = false;
  double t = 0.0;  // along [a,b]
  double u = 0.0;  // along [c,d]
  Point2 point;
};

inline SegIntersection segment_intersection(const Point2& a, const Point2& b, const Point2& c,
                                            const Point2& d) {
  SegIntersection r;
  Point2 ab = b - a;
  Point2 cd = d - c;
  double denom = cross(ab, cd);
  if (std::abs(denom) < 1e-15) return r;
  Point2 ac = c - a;
  double t = cross(ac, cd) / denom;
  double u = cross(ac, ab) / denom;
  if (t < -1e-12 || t > 1.0 + 1e-12 || u < -1e-12 || u > 1.0 + 1e-12) return r;
  r.hit = true;
  r.t = std::clamp(t, 0.0, 1.0);
  r.u = std::clamp(u, 0.0, 1.0);
  r.point = a + ab * r.t;
  return r;
}

}  // namespace roadgen::geom
