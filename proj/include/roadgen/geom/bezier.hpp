#pragma once

#include <array>
#include <vector>

#include "roadgen/errors.hpp"
#include "roadgen/geom/types.hpp"

namespace roadgen::geom {

struct CubicBezier3 {
  std::array<Point3, 4> cp;

  Point3 position(double t) const {
    double u = 1.0 - t;
    return cp[0] * (u * u * u) + cp[1] * (3.0 * u * u * t) + cp[2] * (3.0 * u * t * t) +
           cp[3] * (t * t * t);
  }

  Point3 derivative(double t) const {
    double u = 1.0 - t;
    return (cp[1] - cp[0]) * (3.0 * u * u) + (cp[2] - cp[1]) * (6.0 * u * t) +
           (cp[3] - cp[2]) * (3.0 * t * t);
  }

  Point3 second_derivative(double t) const {
    double u = 1.0 - t;
    return (cp[2] - cp[1] * 2.0 + cp[0]) * (6.0 * u) + (cp[3] - cp[2] * 2.0 + cp[1]) * (6.0 * t);
  }

  std::vector<Point3> sample(int n) const {
    std::vector<Point3> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(position(static_cast<double>(i) / (n - 1)));
    return out;
  }
};

// Hermite-style cubic: control points p0, p0 + L*t0, p1 - L*t1, p1 with
// L = handle_scale * |p1 - p0|. End tangents are parallel to t0 / t1 by
// construction.
inline CubicBezier3 cubic_bezier_from_tangents(const Point3& p0, const Point3& t0, const Point3& p1,
                                               const Point3& t1, double handle_scale = 1.0 / 3.0) {
  double chord = distance(p0, p1);
  if (chord < 1e-6) raise(errc::degenerate_span, "bezier end points coincide");
  double lambda = handle_scale * chord;
  return CubicBezier3{{p0, p0 + normalized(t0) * lambda, p1 - normalized(t1) * lambda, p1}};
}

}  // namespace roadgen::geom
