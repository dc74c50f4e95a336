// Benchmark comparing the serial reference kernels against the OpenMP paths:
// raster segmentation, per-axis profile fitting, lane generation and meshing.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "CLI11.hpp"
#include "roadgen/lanes/lanes.hpp"
#include "roadgen/net/build.hpp"
#include "roadgen/parallel.hpp"
#include "roadgen/pipeline/mesh.hpp"
#include "roadgen/profile/profile.hpp"
#include "roadgen/terrain/segment.hpp"

using namespace roadgen;
using geom::Point2;

namespace {

net::CenterlineSet make_grid(int m, double spacing) {
  net::CenterlineSet cl;
  auto at = [&](int i, int j) { return Point2{i * spacing, j * spacing}; };
  int idx = 0;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i + 1 < m; ++i) {
      net::RoadSpec r;
      r.id = "h" + std::to_string(idx++);
      r.axis = geom::Polyline({at(i, j), at(i + 1, j)});
      r.width = 8.0;
      r.design_speed = 20.0;
      cl.roads.push_back(std::move(r));
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j + 1 < m; ++j) {
      net::RoadSpec r;
      r.id = "v" + std::to_string(idx++);
      r.axis = geom::Polyline({at(i, j), at(i, j + 1)});
      r.width = 8.0;
      r.design_speed = 20.0;
      cl.roads.push_back(std::move(r));
    }
  }
  return cl;
}

terrain::HeightField rolling_dem(double x0, double y0, double x1, double y1, double cellsize) {
  int ncols = static_cast<int>(std::ceil((x1 - x0) / cellsize));
  int nrows = static_cast<int>(std::ceil((y1 - y0) / cellsize));
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(ncols) * nrows);
  for (int r = 0; r < nrows; ++r) {
    for (int c = 0; c < ncols; ++c) {
      double x = x0 + (c + 0.5) * cellsize;
      double y = y0 + (r + 0.5) * cellsize;
      values.push_back(100.0 + 6.0 * std::sin(x / 260.0) + 4.0 * std::cos(y / 310.0));
    }
  }
  return terrain::HeightField(ncols, nrows, cellsize, {x0, y0}, std::move(values));
}

template <typename F>
double time_ms(F&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernel benchmark"};
  int m = 9;
  int threads = 0;
  int repeats = 3;
  app.add_option("--grid", m, "grid size (m x m intersections)");
  app.add_option("--threads", threads, "OpenMP threads (0 = hardware default)");
  app.add_option("--repeats", repeats, "repetitions per measurement");
  CLI11_PARSE(app, argc, argv);
  if (threads > 0) set_thread_count(threads);

  double spacing = 150.0;
  double margin = 100.0;
  double extent = (m - 1) * spacing;

  std::printf("building %dx%d grid network (threads: %d)...\n", m, m, hardware_threads());
  net::CenterlineSet cl = net::smooth_centerlines(make_grid(m, spacing), 2.0);
  net::RoadNetwork2D network = net::build_network(cl, net::BuildParams{});
  terrain::HeightField hf =
      rolling_dem(-margin, -margin, extent + margin, extent + margin, 5.0);
  std::printf("links: %zu, intersections: %zu, raster: %dx%d\n", network.links.size(),
              network.intersections.size(), hf.ncols(), hf.nrows());

  profile::ProfileParams prof_params;
  lanes::LaneParams lane_params;

  struct Row {
    const char* name;
    double serial_ms;
    double parallel_ms;
  };
  std::vector<Row> rows;

  auto bench = [&](const char* name, auto&& fn) {
    double serial = 1e300, parallel = 1e300;
    for (int rep = 0; rep < repeats; ++rep) {
      serial = std::min(serial, time_ms([&] { fn(ExecutionPolicy::serial); }));
      parallel = std::min(parallel, time_ms([&] { fn(ExecutionPolicy::parallel); }));
    }
    rows.push_back({name, serial, parallel});
  };

  bench("segment_elevation", [&](ExecutionPolicy p) { terrain::segment_elevation(hf, network, p); });

  profile::ProfileSet profiles;
  bench("build_profiles", [&](ExecutionPolicy p) {
    profiles = profile::build_profiles(network, hf, prof_params, p);
  });
  profile::stitch_junctions(network, hf, prof_params, profiles);

  bench("build_lane_graph", [&](ExecutionPolicy p) {
    lanes::build_lane_graph(network, profiles, lane_params, p);
  });

  bench("build_mesh", [&](ExecutionPolicy p) {
    pipeline::build_mesh(network, profiles, 2.0, nullptr, p);
  });

  std::printf("\n%-20s %12s %12s %9s\n", "kernel", "serial ms", "openmp ms", "speedup");
  for (const auto& row : rows) {
    std::printf("%-20s %12.1f %12.1f %8.2fx\n", row.name, row.serial_ms, row.parallel_ms,
                row.serial_ms / row.parallel_ms);
  }
  return 0;
}
