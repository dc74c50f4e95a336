#pragma once

// Synthetic networks and rasters shared across the test suites.

#include <cmath>
#include <string>
#include <vector>

#include "roadgen/net/build.hpp"
#include "roadgen/net/types.hpp"
#include "roadgen/terrain/heightfield.hpp"
#include "support/oracles.hpp"

namespace fixtures {

using roadgen::geom::Point2;
using roadgen::geom::Polyline;
using roadgen::net::CenterlineSet;
using roadgen::net::RoadSpec;
using roadgen::terrain::HeightField;

inline RoadSpec make_road(std::string id, std::vector<Point2> pts, double width = 8.0,
                          double speed = 20.0) {
  RoadSpec r;
  r.id = std::move(id);
  r.axis = Polyline(std::move(pts));
  r.width = width;
  r.design_speed = speed;
  return r;
}

// k arms radiating from the origin at the given headings.
inline CenterlineSet make_star(const std::vector<double>& headings, double arm_len = 200.0,
                               double width = 8.0, double speed = 20.0) {
  CenterlineSet cl;
  int idx = 0;
  for (double a : headings) {
    Point2 dir{std::cos(a), std::sin(a)};
    cl.roads.push_back(
        make_road("a" + std::to_string(idx++), {Point2{0, 0}, dir * arm_len}, width, speed));
  }
  return cl;
}

inline CenterlineSet make_cross(double arm_len = 200.0, double width = 8.0, double speed = 20.0) {
  return make_star({0.0, M_PI / 2.0, M_PI, 3.0 * M_PI / 2.0}, arm_len, width, speed);
}

inline CenterlineSet make_y(double arm_len = 200.0, double width = 8.0, double speed = 20.0) {
  return make_star({M_PI / 2.0, M_PI / 2.0 + 2.0 * M_PI / 3.0, M_PI / 2.0 + 4.0 * M_PI / 3.0},
                   arm_len, width, speed);
}

// Two full axes crossing at the origin; the builder splits them into 4 arms.
inline CenterlineSet make_cross_two_axes(double arm_len = 200.0, double width = 8.0,
                                         double speed = 20.0) {
  CenterlineSet cl;
  cl.roads.push_back(
      make_road("ew", {Point2{-arm_len, 0}, Point2{arm_len, 0}}, width, speed));
  cl.roads.push_back(
      make_road("ns", {Point2{0, -arm_len}, Point2{0, arm_len}}, width, speed));
  return cl;
}

// Through road plus a stub touching its middle.
inline CenterlineSet make_t(double arm_len = 200.0, double width = 8.0, double speed = 20.0) {
  CenterlineSet cl;
  cl.roads.push_back(
      make_road("main", {Point2{-arm_len, 0}, Point2{arm_len, 0}}, width, speed));
  cl.roads.push_back(make_road("stub", {Point2{0, 0}, Point2{0, arm_len}}, width, speed));
  return cl;
}

inline CenterlineSet make_isolated(double length = 150.0, double width = 8.0,
                                   double speed = 20.0) {
  CenterlineSet cl;
  cl.roads.push_back(make_road("solo", {Point2{0, 0}, Point2{length, 0}}, width, speed));
  return cl;
}

// Random k-arm junction: headings at least min_sep apart, random widths.
inline CenterlineSet make_random_junction(oracles::Rng& rng, int k, double min_sep_deg = 20.0,
                                          double arm_len = 400.0) {
  std::vector<double> headings;
  double min_sep = min_sep_deg * M_PI / 180.0;
  int guard = 0;
  while (static_cast<int>(headings.size()) < k && guard++ < 10000) {
    double a = rng.uniform(0.0, 2.0 * M_PI);
    bool ok = true;
    for (double b : headings) {
      double d = std::abs(a - b);
      d = std::min(d, 2.0 * M_PI - d);
      if (d < min_sep) ok = false;
    }
    if (ok) headings.push_back(a);
  }
  CenterlineSet cl = make_star(headings, arm_len, 8.0, 20.0);
  for (auto& road : cl.roads) road.width = rng.uniform(6.0, 16.0);
  cl.l_dis = 120.0;  // keep every corner of one junction in a single cluster
  return cl;
}

// m x m street grid; axes between adjacent grid nodes (already split).
inline CenterlineSet make_grid(int m, double spacing = 150.0, double width = 8.0,
                               double speed = 20.0) {
  CenterlineSet cl;
  auto at = [&](int i, int j) { return Point2{i * spacing, j * spacing}; };
  int idx = 0;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i + 1 < m; ++i) {
      cl.roads.push_back(make_road("h" + std::to_string(idx++), {at(i, j), at(i + 1, j)}, width,
                                   speed));
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j + 1 < m; ++j) {
      cl.roads.push_back(make_road("v" + std::to_string(idx++), {at(i, j), at(i, j + 1)}, width,
                                   speed));
    }
  }
  return cl;
}

inline HeightField flat_dem(double x0, double y0, double x1, double y1, double z,
                            double cellsize = 10.0) {
  int ncols = static_cast<int>(std::ceil((x1 - x0) / cellsize));
  int nrows = static_cast<int>(std::ceil((y1 - y0) / cellsize));
  std::vector<double> values(static_cast<std::size_t>(ncols) * nrows, z);
  return HeightField(ncols, nrows, cellsize, {x0, y0}, std::move(values));
}

// h = a*x + b*y + c
inline HeightField ramp_dem(double x0, double y0, double x1, double y1, double a, double b,
                            double c, double cellsize = 10.0) {
  int ncols = static_cast<int>(std::ceil((x1 - x0) / cellsize));
  int nrows = static_cast<int>(std::ceil((y1 - y0) / cellsize));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(ncols) * nrows);
  for (int r = 0; r < nrows; ++r) {
    for (int col = 0; col < ncols; ++col) {
      double x = x0 + (col + 0.5) * cellsize;
      double y = y0 + (r + 0.5) * cellsize;
      values.push_back(a * x + b * y + c);
    }
  }
  return HeightField(ncols, nrows, cellsize, {x0, y0}, std::move(values));
}

// Gaussian ridge of the given height across x = ridge_x.
inline HeightField ridge_dem(double x0, double y0, double x1, double y1, double ridge_x,
                             double ridge_height, double ridge_sigma, double base = 100.0,
                             double cellsize = 10.0) {
  int ncols = static_cast<int>(std::ceil((x1 - x0) / cellsize));
  int nrows = static_cast<int>(std::ceil((y1 - y0) / cellsize));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(ncols) * nrows);
  for (int r = 0; r < nrows; ++r) {
    for (int col = 0; col < ncols; ++col) {
      double x = x0 + (col + 0.5) * cellsize;
      double d = (x - ridge_x) / ridge_sigma;
      values.push_back(base + ridge_height * std::exp(-d * d));
    }
  }
  return HeightField(ncols, nrows, cellsize, {x0, y0}, std::move(values));
}

}  // namespace fixtures
