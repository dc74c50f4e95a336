#include <cmath>
#include <vector>

#include "doctest.h"
#include "roadgen/geom/douglas_peucker.hpp"
#include "roadgen/geom/offset.hpp"
#include "support/oracles.hpp"

using namespace roadgen::geom;

namespace {

Polyline arc_polyline(double radius, double a0, double a1, int n, Point2 center = {0, 0}) {
  std::vector<Point2> pts;
  for (int i = 0; i < n; ++i) {
    double a = a0 + (a1 - a0) * i / (n - 1);
    pts.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return Polyline(std::move(pts));
}

Polyline wavy_polyline(int n, double length, double amp, double period) {
  std::vector<Point2> pts;
  for (int i = 0; i < n; ++i) {
    double x = length * i / (n - 1);
    pts.push_back({x, amp * std::sin(2.0 * M_PI * x / period)});
  }
  return Polyline(std::move(pts));
}

std::vector<Point2> dense_samples(const ParamCurve& c, int n) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pts.push_back(c.position(c.length() * i / (n - 1)));
  return pts;
}

}  // namespace

TEST_CASE("straight line offsets to a parallel line") {
  auto curve = ParamCurve::from_polyline(Polyline({{0, 0}, {50, 0}}));
  Polyline off = offset_polyline(curve, 4.0, Side::left);
  for (const auto& p : off.points()) CHECK(p.y == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(off.front().x < off.back().x);  // orientation preserved
}

TEST_CASE("arc offsets to a concentric arc") {
  auto curve = ParamCurve::from_polyline(arc_polyline(50.0, 0.0, M_PI / 2.0, 64));
  // counterclockwise arc: left normal points inward
  Polyline off = offset_polyline(curve, 4.0, Side::left);
  for (const auto& p : off.points()) CHECK(norm(p) == doctest::Approx(46.0).epsilon(2e-4));
}

TEST_CASE("every offset point sits at distance d from the source curve") {
  auto curve = ParamCurve::from_polyline(wavy_polyline(60, 120.0, 3.0, 60.0));
  Polyline off = offset_polyline(curve, 4.0, Side::right);
  auto cloud = dense_samples(curve, 20000);
  for (const auto& p : off.points()) {
    CHECK(oracles::min_distance_to_samples(p, cloud) == doctest::Approx(4.0).epsilon(2.5e-4));
  }
}

TEST_CASE("offset collapse is reported when d exceeds the curvature radius") {
  auto tight = ParamCurve::from_polyline(arc_polyline(2.0, 0.0, 1.8 * M_PI, 64));
  CHECK_THROWS_AS(offset_polyline(tight, 4.0, Side::left), roadgen::Error);
}

TEST_CASE("offset round trip returns near the original curve") {
  auto curve = ParamCurve::from_polyline(wavy_polyline(80, 150.0, 4.0, 80.0));
  double d = 4.0;
  Polyline left = offset_polyline(curve, d, Side::left);
  auto back_curve = ParamCurve::from_polyline(left);
  Polyline back = offset_polyline(back_curve, d, Side::right);

  auto orig_cloud = dense_samples(curve, 8000);
  double worst = oracles::hausdorff(back.points(), orig_cloud);
  CHECK(worst < 1e-3 * d);
}

TEST_CASE("collinear points are removed at eps 0.1") {
  Polyline out = douglas_peucker(Polyline({{0, 0}, {5, 0}, {10, 0}}), 0.1);
  REQUIRE(out.size() == 2);
  CHECK(out.front() == Point2{0, 0});
  CHECK(out.back() == Point2{10, 0});
}

TEST_CASE("deviation above eps is preserved") {
  Polyline in({{0, 0}, {5, 1}, {10, 0}});
  Polyline out = douglas_peucker(in, 0.5);
  CHECK(out.size() == 3);
}

TEST_CASE("eps 0 drops exactly collinear interior points only") {
  Polyline in({{0, 0}, {5, 0}, {10, 0}, {10, 5}});
  Polyline out = douglas_peucker(in, 0.0);
  REQUIRE(out.size() == 3);  // (5,0) is collinear inside (0,0)-(10,0)
  CHECK(out[1] == Point2{10, 0});
}

TEST_CASE("simplification matches the exhaustive recursive oracle") {
  oracles::Rng rng(42);
  const double eps_grid[] = {0.0, 0.05, 0.2, 0.8, 2.5};
  for (int trial = 0; trial < 100; ++trial) {
    int n = rng.uniform_int(3, 12);
    std::vector<Point2> pts;
    double x = 0.0;
    for (int i = 0; i < n; ++i) {
      x += rng.uniform(0.5, 3.0);
      pts.push_back({x, rng.uniform(-2.0, 2.0)});
    }
    for (double eps : eps_grid) {
      auto expect = oracles::douglas_peucker_reference(pts, eps);
      Polyline got = douglas_peucker(Polyline(pts), eps);
      REQUIRE(got.size() == expect.size());
      for (std::size_t i = 0; i < expect.size(); ++i) CHECK(got[i] == expect[i]);
    }
  }
}

TEST_CASE("simplification is idempotent") {
  oracles::Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point2> pts;
    double x = 0.0;
    int n = rng.uniform_int(4, 12);
    for (int i = 0; i < n; ++i) {
      x += rng.uniform(0.5, 3.0);
      pts.push_back({x, rng.uniform(-2.0, 2.0)});
    }
    double eps = rng.uniform(0.01, 1.0);
    Polyline once = douglas_peucker(Polyline(pts), eps);
    Polyline twice = douglas_peucker(once, eps);
    REQUIRE(once.size() == twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) CHECK(once[i] == twice[i]);
  }
}

TEST_CASE("dropped points stay within eps of the simplified chain") {
  oracles::Rng rng(1234);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Point2> pts;
    double x = 0.0;
    int n = rng.uniform_int(5, 12);
    for (int i = 0; i < n; ++i) {
      x += rng.uniform(0.5, 3.0);
      pts.push_back({x, rng.uniform(-2.0, 2.0)});
    }
    double eps = rng.uniform(0.05, 1.5);
    Polyline out = douglas_peucker(Polyline(pts), eps);
    for (const auto& p : pts) {
      double best = 1e300;
      for (std::size_t i = 0; i + 1 < out.size(); ++i) {
        best = std::min(best, oracles::seg_distance(p, out[i], out[i + 1]));
      }
      CHECK(best <= eps + 1e-12);
    }
  }
}
