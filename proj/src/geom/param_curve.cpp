#include "roadgen/geom/param_curve.hpp"

#include <algorithm>
#include <cmath>

namespace roadgen::geom {

namespace {

// Barry-Goldman evaluation of one non-uniform Catmull-Rom span, with the
// derivative carried through the lerp pyramid.
struct Lerped {
  Point2 v;
  Point2 d;
};

Lerped lerp_node(const Lerped& a, const Lerped& b, double ta, double tb, double t) {
  double inv = 1.0 / (tb - ta);
  double wa = (tb - t) * inv;
  double wb = (t - ta) * inv;
  Lerped r;
  r.v = a.v * wa + b.v * wb;
  r.d = (b.v - a.v) * inv + a.d * wa + b.d * wb;
  return r;
}

}  // namespace

ParamCurve ParamCurve::from_polyline(const Polyline& poly, double refine_step) {
  ParamCurve c;
  c.source_ = poly;
  c.refine_step_ = std::max(refine_step, 1e-4);

  const auto& p = poly.points();
  std::size_t n = p.size();

  // Phantom end points chosen so the end tangent matches the parabola
  // through the three nearest samples (plain reflection degrades the end
  // tangent to the chord direction).
  auto parabolic_tangent = [](const Point2& q0, const Point2& q1, const Point2& q2) {
    double a = distance(q0, q1);
    double b = a + distance(q1, q2);
    if (b - a < 1e-12) return normalized(q1 - q0);
    Point2 d = q0 * (-(a + b) / (a * b)) + q1 * (b / (a * (b - a))) + q2 * (-a / (b * (b - a)));
    return normalized(d);
  };
  Point2 front_phantom = p[0] * 2.0 - p[1];
  Point2 back_phantom = p[n - 1] * 2.0 - p[n - 2];
  if (n >= 3) {
    Point2 tf = parabolic_tangent(p[0], p[1], p[2]);
    front_phantom = p[1] - tf * (2.0 * distance(p[0], p[1]));
    Point2 tb = parabolic_tangent(p[n - 1], p[n - 2], p[n - 3]);
    back_phantom = p[n - 2] - tb * (2.0 * distance(p[n - 1], p[n - 2]));
  }

  c.pts_.reserve(n + 2);
  c.pts_.push_back(front_phantom);
  c.pts_.insert(c.pts_.end(), p.begin(), p.end());
  c.pts_.push_back(back_phantom);

  c.knots_.resize(c.pts_.size());
  c.knots_[0] = 0.0;
  for (std::size_t i = 1; i < c.pts_.size(); ++i) {
    double d = std::sqrt(distance(c.pts_[i - 1], c.pts_[i]));
    c.knots_[i] = c.knots_[i - 1] + std::max(d, 1e-9);
  }

  // Cumulative chord table over refined samples; knot index 1..n in pts_
  // corresponds to the input points.
  c.table_s_.push_back(0.0);
  c.table_t_.push_back(c.knots_[1]);
  c.table_p_.push_back(p[0]);
  double s = 0.0;
  Point2 prev = p[0];
  for (std::size_t seg = 1; seg + 2 < c.pts_.size(); ++seg) {
    double t0 = c.knots_[seg];
    double t1 = c.knots_[seg + 1];
    double chord = distance(c.pts_[seg], c.pts_[seg + 1]);
    int m = static_cast<int>(std::clamp(std::ceil(chord / c.refine_step_), 4.0, 256.0));
    for (int k = 1; k <= m; ++k) {
      double t = (k == m) ? t1 : t0 + (t1 - t0) * (static_cast<double>(k) / m);
      Point2 q = (k == m) ? c.pts_[seg + 1] : c.eval(t).pos;
      s += distance(prev, q);
      prev = q;
      c.table_s_.push_back(s);
      c.table_t_.push_back(t);
      c.table_p_.push_back(q);
    }
  }
  c.total_length_ = s;
  return c;
}

ParamCurve::Eval ParamCurve::eval(double t) const {
  // Locate the span so that knots_[i] <= t <= knots_[i+1] with i in
  // [1, pts_.size()-3].
  // Window pts_[i-2 .. i+1] covers the span [knots_[i-1], knots_[i]].
  auto it = std::upper_bound(knots_.begin() + 1, knots_.end() - 2, t);
  std::size_t i = static_cast<std::size_t>(std::distance(knots_.begin(), it));
  i = std::clamp<std::size_t>(i, 2, pts_.size() - 2);
  std::size_t s0 = i - 2;  // window pts_[s0..s0+3]

  Lerped l0{pts_[s0], {0, 0}};
  Lerped l1{pts_[s0 + 1], {0, 0}};
  Lerped l2{pts_[s0 + 2], {0, 0}};
  Lerped l3{pts_[s0 + 3], {0, 0}};
  double t0 = knots_[s0], t1 = knots_[s0 + 1], t2 = knots_[s0 + 2], t3 = knots_[s0 + 3];

  Lerped a1 = lerp_node(l0, l1, t0, t1, t);
  Lerped a2 = lerp_node(l1, l2, t1, t2, t);
  Lerped a3 = lerp_node(l2, l3, t2, t3, t);
  Lerped b1 = lerp_node(a1, a2, t0, t2, t);
  Lerped b2 = lerp_node(a2, a3, t1, t3, t);
  Lerped r = lerp_node(b1, b2, t1, t2, t);
  return {r.v, r.d};
}

double ParamCurve::t_from_s(double s) const {
  s = std::clamp(s, 0.0, total_length_);
  auto it = std::upper_bound(table_s_.begin(), table_s_.end(), s);
  if (it == table_s_.begin()) return table_t_.front();
  if (it == table_s_.end()) return table_t_.back();
  std::size_t hi = static_cast<std::size_t>(std::distance(table_s_.begin(), it));
  std::size_t lo = hi - 1;
  double ds = table_s_[hi] - table_s_[lo];
  double w = ds > 0.0 ? (s - table_s_[lo]) / ds : 0.0;
  return table_t_[lo] + (table_t_[hi] - table_t_[lo]) * w;
}

double ParamCurve::s_from_t(double t) const {
  auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
  if (it == table_t_.begin()) return table_s_.front();
  if (it == table_t_.end()) return table_s_.back();
  std::size_t hi = static_cast<std::size_t>(std::distance(table_t_.begin(), it));
  std::size_t lo = hi - 1;
  double dt = table_t_[hi] - table_t_[lo];
  double w = dt > 0.0 ? (t - table_t_[lo]) / dt : 0.0;
  return table_s_[lo] + (table_s_[hi] - table_s_[lo]) * w;
}

Point2 ParamCurve::position(double s) const {
  s = std::clamp(s, 0.0, total_length_);
  if (s == 0.0) return source_.front();
  if (s == total_length_) return source_.back();
  return eval(t_from_s(s)).pos;
}

Point2 ParamCurve::tangent(double s) const {
  s = std::clamp(s, 0.0, total_length_);
  Point2 d = eval(t_from_s(s)).deriv;
  double n = norm(d);
  if (n < 1e-14) {
    // fall back to a small chord around s
    double h = std::max(1e-6, total_length_ * 1e-9);
    Point2 a = position(std::max(0.0, s - h));
    Point2 b = position(std::min(total_length_, s + h));
    return normalized(b - a);
  }
  return d / n;
}

double ParamCurve::curvature(double s) const {
  double h = std::max(1e-4, total_length_ * 1e-6);
  double s0 = std::clamp(s - h, 0.0, total_length_);
  double s1 = std::clamp(s + h, 0.0, total_length_);
  Point2 ta = tangent(s0);
  Point2 tb = tangent(s1);
  double dtheta = std::asin(std::clamp(cross(ta, tb), -1.0, 1.0));
  return (s1 > s0) ? dtheta / (s1 - s0) : 0.0;
}

double ParamCurve::project(const Point2& p) const {
  // Coarse scan (first minimum wins, so ties resolve to smaller s).
  std::size_t best = 0;
  double best_d = norm_sq(table_p_[0] - p);
  for (std::size_t i = 1; i < table_p_.size(); ++i) {
    double d = norm_sq(table_p_[i] - p);
    if (d < best_d - 1e-18) {
      best_d = d;
      best = i;
    }
  }

  double t = table_t_[best];
  double t_lo = table_t_.front();
  double t_hi = table_t_.back();
  double span = t_hi - t_lo;
  double fd_h = std::max(1e-8, span * 1e-7);
  for (int iter = 0; iter < 30; ++iter) {
    Eval e = eval(t);
    Point2 r = e.pos - p;
    double g = dot(r, e.deriv);
    Point2 d_plus = eval(std::min(t + fd_h, t_hi)).deriv;
    Point2 d_minus = eval(std::max(t - fd_h, t_lo)).deriv;
    Point2 dd = (d_plus - d_minus) / (std::min(t + fd_h, t_hi) - std::max(t - fd_h, t_lo));
    double dg = norm_sq(e.deriv) + dot(r, dd);
    if (std::abs(dg) < 1e-18) break;
    double step = g / dg;
    t = std::clamp(t - step, t_lo, t_hi);
    if (std::abs(step) < 1e-13 * std::max(1.0, span)) break;
  }

  // Keep the Newton result only if it actually improves on the scan.
  Point2 refined = eval(t).pos;
  if (norm_sq(refined - p) <= best_d + 1e-18) return std::clamp(s_from_t(t), 0.0, total_length_);
  return table_s_[best];
}

ParamCurve ParamCurve::reversed() const {
  return from_polyline(source_.reversed(), refine_step_);
}

}  // namespace roadgen::geom
