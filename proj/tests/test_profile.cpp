#include <cmath>

#include "doctest.h"
#include "roadgen/net/build.hpp"
#include "roadgen/profile/profile.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace roadgen;
using namespace roadgen::profile;
using geom::ParamCurve;
using geom::Point2;
using geom::Polyline;

namespace {

net::Intersection square_intersection(double half, Point2 center = {0, 0}) {
  net::Intersection x;
  x.id = "I0";
  x.arms = 2;
  x.boundary = {{center.x + half, center.y + half},
                {center.x + half, center.y - half},
                {center.x - half, center.y - half},
                {center.x - half, center.y + half}};
  x.centroid = center;
  return x;
}

}  // namespace

TEST_CASE("intersection flattening is the vertex mean") {
  // ramp chosen so the four vertices sample {10, 12, 14, 12}
  terrain::HeightField hf = fixtures::ramp_dem(-100, -100, 100, 100, 0.1, 0.0, 12.0, 5.0);
  net::Intersection x = square_intersection(20.0);  // vertices at x = +-20 -> 14, 10
  IntersectionElevation z = flatten_intersection(x, hf);
  CHECK(z.z == doctest::Approx(12.0).epsilon(1e-12));

  terrain::HeightField flat = fixtures::flat_dem(-100, -100, 100, 100, 5.0);
  CHECK(flatten_intersection(x, flat).z == doctest::Approx(5.0).epsilon(1e-12));

  // k = 3 with vertex elevations {0,0,0,6,6,6}
  net::Intersection tri;
  tri.id = "I1";
  tri.arms = 3;
  tri.boundary = {{-20, -10}, {-20, 0}, {-20, 10}, {20, -10}, {20, 0}, {20, 10}};
  terrain::HeightField split = fixtures::ramp_dem(-100, -100, 100, 100, 0.15, 0.0, 3.0, 5.0);
  CHECK(flatten_intersection(tri, split).z == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("control vectors on flat terrain keep every sample") {
  terrain::HeightField hf = fixtures::flat_dem(-50, -50, 450, 50, 7.0);
  auto axis = ParamCurve::from_polyline(Polyline({{0, 0}, {400, 0}}));
  ProfileParams params;
  params.delta_s = 10.0;
  ControlVectorSet cv = sample_control_vectors(axis, hf, params);
  CHECK(cv.s.size() == 41);
  for (double h : cv.h) CHECK(h == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(cv.n_total <= static_cast<int>(std::floor(axis.length() / params.delta_s)));
  CHECK(cv.s.front() == 0.0);
  CHECK(cv.s.back() == doctest::Approx(axis.length()));
}

TEST_CASE("an elevation spike is dropped by the slope rule") {
  // flat field with one spiked cell on the axis
  int ncols = 50, nrows = 10;
  std::vector<double> values(static_cast<std::size_t>(ncols) * nrows, 100.0);
  // spike at x ~ 205 (col 20), y ~ 55 (row 5) with cellsize 10, origin (0,0)
  values[5 * 50 + 20] = 150.0;
  terrain::HeightField hf(ncols, nrows, 10.0, {0, 0}, std::move(values));
  auto axis = ParamCurve::from_polyline(Polyline({{10, 55}, {480, 55}}));
  ProfileParams params;
  params.delta_s = 10.0;
  params.slope_max = 0.08;
  ControlVectorSet cv = sample_control_vectors(axis, hf, params);
  for (std::size_t i = 0; i < cv.s.size(); ++i) {
    CHECK(cv.h[i] < 120.0);  // the spiked samples never enter the set
  }
  CHECK(cv.s.size() > 30);  // but most samples survive
}

TEST_CASE("profile fit of affine control vectors is exact with zero curvature") {
  ControlVectorSet cv;
  cv.axis_id = "a";
  cv.delta_s = 5.0;
  for (int k = 0; k <= 30; ++k) {
    cv.s.push_back(5.0 * k);
    cv.h.push_back(2.0 + 0.01 * 5.0 * k);
  }
  ProfileParams params;
  ProfileCurve prof = fit_profile(cv, params);
  CHECK(prof.max_abs_curvature < 1e-9);
  CHECK(prof.max_abs_slope == doctest::Approx(0.01).epsilon(1e-6));
  CHECK(prof.elevation_at(77.0) == doctest::Approx(2.77).epsilon(1e-9));
}

TEST_CASE("parabolic control vectors stay under the curvature bound") {
  ControlVectorSet cv;
  cv.axis_id = "p";
  cv.delta_s = 1.0;
  for (int k = 0; k <= 10; ++k) {
    cv.s.push_back(static_cast<double>(k));
    cv.h.push_back(0.04 * k * k);
  }
  ProfileParams params;
  params.slope_max = 1.0;
  ProfileCurve prof = fit_profile(cv, params);
  CHECK(prof.max_abs_curvature == doctest::Approx(0.08).epsilon(1e-3));
  CHECK(prof.max_abs_curvature <= 0.1);
}

TEST_CASE("link elevation is constant across the section normal") {
  auto cl = net::smooth_centerlines(fixtures::make_isolated(200.0), 2.0);
  net::RoadNetwork2D net = net::build_network(cl, net::BuildParams{}, ExecutionPolicy::serial);
  terrain::HeightField hf = fixtures::ramp_dem(-50, -100, 300, 100, 0.02, 0.0, 50.0);
  ProfileParams params;
  ProfileSet profiles = build_profiles(net, hf, params, ExecutionPolicy::serial);
  const auto& seg = net.seg_axes[0];
  LinkElevation elev(&profiles.axis_curves.at(seg.id), &profiles.profiles.at(seg.id));

  // on-axis point equals the profile value
  const ParamCurve& axis = profiles.axis_curves.at(seg.id);
  Point2 p20 = axis.position(20.0);
  CHECK(elev.z_at(p20) == doctest::Approx(profiles.profiles.at(seg.id).elevation_at(20.0)).epsilon(1e-12));

  // same-normal probes agree
  oracles::Rng rng(5);
  for (int probe = 0; probe < 200; ++probe) {
    double s = rng.uniform(5.0, axis.length() - 5.0);
    Point2 n = geom::left_normal(axis.tangent(s));
    Point2 a = axis.position(s) + n * 1.0;
    Point2 b = axis.position(s) + n * 3.0;
    CHECK(std::abs(elev.z_at(a) - elev.z_at(b)) < 1e-9);
  }

  // straight link + linear profile: z varies linearly with the along-axis coordinate
  double z0 = elev.z_at(axis.position(10.0));
  double z1 = elev.z_at(axis.position(110.0));
  double zm = elev.z_at(axis.position(60.0));
  CHECK(zm == doctest::Approx(0.5 * (z0 + z1)).epsilon(1e-6));
}

TEST_CASE("stitching pins profile ends to the intersection elevation") {
  auto cl = net::smooth_centerlines(fixtures::make_cross(), 2.0);
  net::RoadNetwork2D net = net::build_network(cl, net::BuildParams{}, ExecutionPolicy::serial);
  terrain::HeightField hf = fixtures::ramp_dem(-250, -250, 250, 250, 0.015, 0.01, 100.0, 5.0);
  ProfileParams params;
  ProfileSet profiles = build_profiles(net, hf, params, ExecutionPolicy::serial);
  stitch_junctions(net, hf, params, profiles, ExecutionPolicy::serial);

  for (const auto& seg : net.seg_axes) {
    const ProfileCurve& prof = profiles.profiles.at(seg.id);
    const ParamCurve& axis = profiles.axis_curves.at(seg.id);
    if (!seg.from_intersection.empty()) {
      double z_int = profiles.intersection_z.at(seg.from_intersection).z;
      CHECK(prof.elevation_at(0.0) == z_int);  // exact, via the pin
    }
    if (!seg.to_intersection.empty()) {
      double z_int = profiles.intersection_z.at(seg.to_intersection).z;
      CHECK(prof.elevation_at(axis.length()) == z_int);
    }
    // certificates hold after the refit
    auto sweep = prof.curve.sweep(params.delta_s / 10.0);
    CHECK(sweep.max_abs_curvature <= params.kappa_max * (1.0 + 1e-6));
    CHECK(sweep.max_abs_slope <= params.slope_max * (1.0 + 1e-6));
  }
}

TEST_CASE("a pinned end moves the interior by at most the end correction") {
  ControlVectorSet cv;
  cv.axis_id = "long";
  cv.delta_s = 5.0;
  for (int k = 0; k <= 40; ++k) {
    double s = 5.0 * k;
    cv.s.push_back(s);
    cv.h.push_back(100.0 + 2.0 * std::sin(s / 40.0));
  }
  ProfileParams params;
  ProfileCurve base = fit_profile(cv, params);
  double end = cv.h.back();
  ProfileCurve pinned = fit_profile(cv, params, std::nullopt, end + 0.4);
  CHECK(pinned.elevation_at(200.0) == doctest::Approx(end + 0.4).epsilon(1e-9));
  double max_change = 0.0;
  for (int k = 0; k <= 400; ++k) {
    double s = 200.0 * k / 400.0;
    max_change = std::max(max_change, std::abs(pinned.elevation_at(s) - base.elevation_at(s)));
  }
  CHECK(max_change <= 0.4 + 1e-6);
}

TEST_CASE("profiles already matching the junction elevation stay unchanged") {
  auto cl = net::smooth_centerlines(fixtures::make_cross(), 2.0);
  net::RoadNetwork2D net = net::build_network(cl, net::BuildParams{}, ExecutionPolicy::serial);
  terrain::HeightField hf = fixtures::flat_dem(-250, -250, 250, 250, 100.0, 5.0);
  ProfileParams params;
  ProfileSet profiles = build_profiles(net, hf, params, ExecutionPolicy::serial);
  auto before = profiles.profiles;
  stitch_junctions(net, hf, params, profiles, ExecutionPolicy::serial);
  for (const auto& [id, prof] : profiles.profiles) {
    // flat terrain: intersection z equals the profile ends already
    for (int k = 0; k <= 20; ++k) {
      double s = prof.curve.domain_start() +
                 (prof.curve.domain_end() - prof.curve.domain_start()) * k / 20.0;
      CHECK(prof.elevation_at(s) == doctest::Approx(before.at(id).elevation_at(s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("dead ends are not pinned") {
  auto cl = net::smooth_centerlines(fixtures::make_isolated(150.0), 2.0);
  net::RoadNetwork2D net = net::build_network(cl, net::BuildParams{}, ExecutionPolicy::serial);
  terrain::HeightField hf = fixtures::flat_dem(-50, -100, 250, 100, 30.0);
  ProfileParams params;
  ProfileSet profiles = build_profiles(net, hf, params, ExecutionPolicy::serial);
  stitch_junctions(net, hf, params, profiles, ExecutionPolicy::serial);
  const ProfileCurve& prof = profiles.profiles.begin()->second;
  CHECK(!prof.pin_start_z.has_value());
  CHECK(!prof.pin_end_z.has_value());
}

TEST_CASE("serial and parallel profile builds agree") {
  auto cl = net::smooth_centerlines(fixtures::make_cross(), 2.0);
  net::RoadNetwork2D net = net::build_network(cl, net::BuildParams{}, ExecutionPolicy::serial);
  // gentle enough that every arm's end-to-end grade stays below slope_max
  terrain::HeightField hf = fixtures::ridge_dem(-250, -250, 250, 250, 0.0, 10.0, 150.0);
  ProfileParams params;
  ProfileSet a = build_profiles(net, hf, params, ExecutionPolicy::serial);
  ProfileSet b = build_profiles(net, hf, params, ExecutionPolicy::parallel);
  for (const auto& [id, prof] : a.profiles) {
    const auto& other = b.profiles.at(id);
    for (int k = 0; k <= 50; ++k) {
      double s = prof.curve.domain_start() +
                 (prof.curve.domain_end() - prof.curve.domain_start()) * k / 50.0;
      CHECK(prof.elevation_at(s) == other.elevation_at(s));
    }
  }
}
