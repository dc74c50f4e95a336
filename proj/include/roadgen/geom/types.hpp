#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "roadgen/errors.hpp"

namespace roadgen::geom {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double k) const { return {x * k, y * k}; }
  Point2 operator/(double k) const { return {x / k, y / k}; }
  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
};

inline Point2 operator*(double k, const Point2& p) { return p * k; }

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Point3 operator+(const Point3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Point3 operator-(const Point3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Point3 operator*(double k) const { return {x * k, y * k, z * k}; }
};

inline Point3 operator*(double k, const Point3& p) { return p * k; }

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Point2& a, const Point2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Point2& p) { return std::hypot(p.x, p.y); }
inline double norm_sq(const Point2& p) { return p.x * p.x + p.y * p.y; }
inline double distance(const Point2& a, const Point2& b) { return norm(a - b); }

inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Point3& p) { return std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z); }
inline double distance(const Point3& a, const Point3& b) { return norm(a - b); }
inline Point3 cross(const Point3& a, const Point3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline Point2 normalized(const Point2& p) {
  double n = norm(p);
  return n > 0.0 ? p / n : Point2{0.0, 0.0};
}

inline Point3 normalized(const Point3& p) {
  double n = norm(p);
  return n > 0.0 ? Point3{p.x / n, p.y / n, p.z / n} : Point3{};
}

// Left normal of a direction vector (counterclockwise quarter turn, y-up).
inline Point2 left_normal(const Point2& t) { return {-t.y, t.x}; }

inline bool finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }
inline bool finite(const Point3& p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }

// Angle between two directions in [0, pi].
inline double angle_between(const Point2& a, const Point2& b) {
  double c = std::clamp(dot(normalized(a), normalized(b)), -1.0, 1.0);
  return std::acos(c);
}

struct Box2 {
  Point2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Point2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};

  void expand(const Point2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  bool contains(const Point2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
};

// Ordered point column; at least two points, consecutive points separated by
// more than kMinSeparation.
class Polyline {
public:
  static constexpr double kMinSeparation = 1e-9;

  Polyline() = default;
  explicit Polyline(std::vector<Point2> pts) : points_(std::move(pts)) { validate(); }

  const std::vector<Point2>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point2& operator[](std::size_t i) const { return points_[i]; }
  const Point2& front() const { return points_.front(); }
  const Point2& back() const { return points_.back(); }

  double length() const {
    double s = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i) s += distance(points_[i - 1], points_[i]);
    return s;
  }

  Polyline reversed() const {
    std::vector<Point2> r(points_.rbegin(), points_.rend());
    return Polyline(std::move(r));
  }

  Box2 bbox() const {
    Box2 b;
    for (const auto& p : points_) b.expand(p);
    return b;
  }

  // Drops consecutive duplicates below kMinSeparation instead of failing.
  static Polyline cleaned(const std::vector<Point2>& pts) {
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (const auto& p : pts) {
      if (out.empty() || distance(out.back(), p) > kMinSeparation) out.push_back(p);
    }
    return Polyline(std::move(out));
  }

private:
  void validate() const {
    if (points_.size() < 2) raise(errc::degenerate_polyline, "polyline needs at least 2 points");
    for (const auto& p : points_) {
      if (!finite(p)) raise(errc::degenerate_polyline, "polyline has non-finite coordinates");
    }
    for (std::size_t i = 1; i < points_.size(); ++i) {
      if (distance(points_[i - 1], points_[i]) <= kMinSeparation) {
        raise(errc::degenerate_polyline, "consecutive duplicate points");
      }
    }
  }

  std::vector<Point2> points_;
};

// Distance from p to segment [a, b].
inline double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
  Point2 ab = b - a;
  double len2 = norm_sq(ab);
  if (len2 <= 0.0) return distance(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return distance(p, a + ab * t);
}

}  // namespace roadgen::geom
