#pragma once

#include <optional>

#include "roadgen/geom/offset.hpp"
#include "roadgen/geom/param_curve.hpp"
#include "roadgen/geom/types.hpp"

namespace roadgen::geom {

// Circular arc with its two tangency points.
struct Arc {
  Point2 center;
  double radius = 0.0;
  double start_angle = 0.0;  // angle of tangency_a from center
  double end_angle = 0.0;    // angle of tangency_b from center
  bool clockwise = false;
  Point2 tangency_a;
  Point2 tangency_b;
  double station_a = 0.0;  // arc length on curve A at tangency_a
  double station_b = 0.0;

  Point2 point_at(double angle) const {
    return {center.x + radius * std::cos(angle), center.y + radius * std::sin(angle)};
  }
  // Unit tangent of the arc at a point on the circle, following the arc's
  // traversal direction.
  Point2 tangent_at(const Point2& p) const {
    Point2 radial = normalized(p - center);
    Point2 t = left_normal(radial);
    return clockwise ? Point2{-t.x, -t.y} : t;
  }
};

struct FilletOptions {
  // Which side of each curve the center lies on. When unset, all four
  // combinations are tried and the candidate closest to the corner wins.
  std::optional<Side> side_a;
  std::optional<Side> side_b;
  // Curves meeting shallower than this are reported as NoFilletExists.
  double parallel_tol = 1e-3;
  double newton_tol = 1e-10;
  int max_iterations = 60;
};

// Arc of radius R tangent to both curves near their crossing (or nearest
// approach). The arc tangent direction matches each curve's tangent at the
// recorded tangency points.
Arc tangent_circle_fillet(const ParamCurve& a, const ParamCurve& b, double radius,
                          const FilletOptions& opt = {});

}  // namespace roadgen::geom
