#pragma once

#include <vector>

#include "roadgen/geom/types.hpp"

namespace roadgen::geom {

// Interpolating curve through a point column, re-parameterized by arc length.
// The underlying interpolant is a centripetal Catmull-Rom spline (reflected
// phantom end points); the s <-> spline-parameter map is a cumulative chord
// table refined to `refine_step`.
class ParamCurve {
public:
  ParamCurve() = default;  // empty; populate via from_polyline
  static ParamCurve from_polyline(const Polyline& poly, double refine_step = 0.25);

  double length() const { return total_length_; }

  Point2 position(double s) const;
  // Unit tangent at arc length s.
  Point2 tangent(double s) const;
  // Signed curvature at arc length s (left turn positive), finite-difference.
  double curvature(double s) const;

  // Arc length of the nearest point on the curve to p; equidistant candidates
  // resolve to the smaller s.
  double project(const Point2& p) const;

  ParamCurve reversed() const;

  const Polyline& source() const { return source_; }

private:
  struct Eval {
    Point2 pos;
    Point2 deriv;  // d position / d spline parameter
  };
  Eval eval(double t) const;
  double t_from_s(double s) const;
  double s_from_t(double t) const;

  Polyline source_;
  std::vector<Point2> pts_;    // with phantom end points at front/back
  std::vector<double> knots_;  // centripetal knots for pts_
  std::vector<double> table_s_;
  std::vector<double> table_t_;
  std::vector<Point2> table_p_;
  double total_length_ = 0.0;
  double refine_step_ = 0.25;
};

}  // namespace roadgen::geom
