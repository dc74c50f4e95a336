#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "roadgen/net/geojson.hpp"
#include "roadgen/pipeline/exports.hpp"
#include "roadgen/pipeline/mesh.hpp"
#include "roadgen/pipeline/pipeline.hpp"
#include "support/fixtures.hpp"

using namespace roadgen;
using namespace roadgen::pipeline;
using geom::Point2;
using geom::Point3;

namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// cross centered at (0,0) with 200 m arms as GeoJSON, plus a flat DEM
void write_cross_inputs(const std::string& dir) {
  std::ostringstream geo;
  geo << R"({"type":"FeatureCollection","features":[)";
  const double dirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  for (int i = 0; i < 4; ++i) {
    if (i) geo << ",";
    geo << R"({"type":"Feature","properties":{"id":"a)" << i
        << R"(","width":8,"design_speed":20},"geometry":{"type":"LineString","coordinates":[[0,0],[)"
        << 200.0 * dirs[i][0] << "," << 200.0 * dirs[i][1] << "]]}}";
  }
  geo << "]}";
  write_file(dir + "/roads.geojson", geo.str());

  std::ostringstream asc;
  asc << "ncols 50\nnrows 50\nxllcorner -250\nyllcorner -250\ncellsize 10\n";
  for (int r = 0; r < 50; ++r) {
    for (int c = 0; c < 50; ++c) asc << (c ? " " : "") << "100";
    asc << "\n";
  }
  write_file(dir + "/terrain.asc", asc.str());
}

PipelineConfig cross_config(const std::string& dir) {
  PipelineConfig cfg;
  cfg.centerlines_path = dir + "/roads.geojson";
  cfg.heightfield_path = dir + "/terrain.asc";
  cfg.out_dir = dir + "/out";
  return cfg;
}

}  // namespace

TEST_CASE("full pipeline on the cross fixture") {
  std::string dir = temp_dir("roadgen_cross");
  write_cross_inputs(dir);
  PipelineConfig cfg = cross_config(dir);
  PipelineResult result = run_pipeline(cfg);

  CHECK(result.report.counts.at("intersections") == 1);
  CHECK(result.report.counts.at("links") == 8);
  CHECK(result.report.counts.at("ilanes") == 12);
  CHECK(result.report.counts.at("connectors") == 12);
  CHECK(result.report.certificates.at("max_abs_curvature") <= 0.1 * (1 + 1e-6));
  CHECK(result.report.certificates.at("max_abs_slope") <= 0.08 * (1 + 1e-6));
  CHECK(result.report.certificates.at("fillet_tangency_max_rad") < 1e-6);

  CHECK(fs::exists(cfg.out_dir + "/network.json"));
  CHECK(fs::exists(cfg.out_dir + "/roads.obj"));
  CHECK(fs::exists(cfg.out_dir + "/report.json"));
}

TEST_CASE("empty centerline input is a clean error") {
  CHECK_THROWS_AS(
      net::parse_centerlines_geojson(R"({"type":"FeatureCollection","features":[]})", "t"),
      Error);
}

TEST_CASE("mesh counts: strip and fan") {
  // straight 10 m link sampled at 5 m: 3 cross-sections, 4 triangles per half
  std::string dir = temp_dir("roadgen_strip");
  write_file(dir + "/roads.geojson",
             R"({"type":"FeatureCollection","features":[{"type":"Feature","properties":{"id":"r","width":8,"design_speed":20},"geometry":{"type":"LineString","coordinates":[[1000,1000],[1010,1000]]}}]})");
  std::ostringstream asc;
  asc << "ncols 10\nnrows 10\nxllcorner 960\nyllcorner 950\ncellsize 10\n";
  for (int r = 0; r < 10; ++r) {
    for (int c = 0; c < 10; ++c) asc << (c ? " " : "") << "5";
    asc << "\n";
  }
  write_file(dir + "/terrain.asc", asc.str());
  PipelineConfig cfg;
  cfg.centerlines_path = dir + "/roads.geojson";
  cfg.heightfield_path = dir + "/terrain.asc";
  cfg.out_dir = dir + "/out";
  cfg.mesh_step = 5.0;
  PipelineResult result = run_pipeline(cfg);
  REQUIRE(result.mesh.regions.size() == 2);  // two halves, no intersections
  for (const auto& region : result.mesh.regions) {
    CHECK(region.vertices.size() == 6);
    CHECK(region.triangles.size() == 4);
    for (const auto& v : region.vertices) CHECK(v.z == doctest::Approx(5.0));  // flat DEM
  }

  MeshRegion fan = fan_triangulate(
      "intersection_I9",
      {{1, 0}, {0.7, -0.7}, {0, -1}, {-0.7, -0.7}, {-1, 0}, {-0.7, 0.7}, {0, 1}, {0.7, 0.7}}, 3.0,
      {0, 0});
  CHECK(fan.triangles.size() == 8);
  CHECK(fan.vertices.size() == 9);
}

TEST_CASE("obj export of a single triangle") {
  RoadMesh mesh;
  MeshRegion region;
  region.id = "link_7";
  region.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
  region.triangles = {{0, 1, 2}};
  mesh.regions.push_back(region);
  std::string dir = temp_dir("roadgen_obj");
  export_obj(mesh, dir + "/tri.obj");
  std::string text = read_file(dir + "/tri.obj");
  CHECK(text.find("o link_7\n") != std::string::npos);
  int n_v = 0, n_f = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("v ", 0) == 0) ++n_v;
    if (line.rfind("f ", 0) == 0) ++n_f;
  }
  CHECK(n_v == 3);
  CHECK(n_f == 1);
}

TEST_CASE("re-running the pipeline produces byte-identical outputs") {
  std::string dir = temp_dir("roadgen_repro");
  write_cross_inputs(dir);
  PipelineConfig cfg = cross_config(dir);
  cfg.out_dir = dir + "/out1";
  run_pipeline(cfg);
  cfg.out_dir = dir + "/out2";
  run_pipeline(cfg);
  CHECK(read_file(dir + "/out1/network.json") == read_file(dir + "/out2/network.json"));
  CHECK(read_file(dir + "/out1/roads.obj") == read_file(dir + "/out2/roads.obj"));
}

TEST_CASE("link end vertices appear bitwise in the intersection fan") {
  std::string dir = temp_dir("roadgen_seam");
  write_cross_inputs(dir);
  PipelineConfig cfg = cross_config(dir);
  PipelineResult result = run_pipeline(cfg);

  auto find_region = [&](const std::string& id) -> const MeshRegion* {
    for (const auto& r : result.mesh.regions) {
      if (r.id == id) return &r;
    }
    return nullptr;
  };
  for (const auto& link : result.net.links) {
    for (const auto* end : {&link.from, &link.to}) {
      if (end->intersection_id.empty()) continue;
      const MeshRegion* link_region = find_region("link_" + link.id);
      const MeshRegion* x_region = find_region("intersection_" + end->intersection_id);
      REQUIRE(link_region != nullptr);
      REQUIRE(x_region != nullptr);
      // both seam vertices of the link end must exist bitwise in both regions
      for (const Point2& p : {end->axis_point, end->gate_vertex}) {
        auto has_vertex = [&](const MeshRegion& region) {
          for (const auto& v : region.vertices) {
            if (v.x == p.x && v.y == p.y) return true;
          }
          return false;
        };
        CHECK(has_vertex(*link_region));
        CHECK(has_vertex(*x_region));
      }
    }
  }
}

TEST_CASE("intersection surface is perfectly flat and seams agree exactly") {
  std::string dir = temp_dir("roadgen_flatness");
  write_cross_inputs(dir);
  PipelineConfig cfg = cross_config(dir);
  PipelineResult result = run_pipeline(cfg);
  for (const auto& region : result.mesh.regions) {
    if (region.id.rfind("intersection_", 0) != 0) continue;
    double z0 = region.vertices.front().z;
    for (const auto& v : region.vertices) CHECK(v.z == z0);
  }
  // link end z equals the intersection z bitwise
  for (const auto& seg : result.net.seg_axes) {
    const auto& prof = result.profiles.profiles.at(seg.id);
    if (!seg.from_intersection.empty()) {
      CHECK(prof.elevation_at(0.0) == result.profiles.intersection_z.at(seg.from_intersection).z);
    }
  }
}

TEST_CASE("ortho reference produces vt records and an mtl file") {
  std::string dir = temp_dir("roadgen_uv");
  write_cross_inputs(dir);
  write_file(dir + "/ortho.json",
             R"({"origin":[-250,-250],"extent":[500,500],"image":"satellite.png"})");
  PipelineConfig cfg = cross_config(dir);
  cfg.ortho_path = dir + "/ortho.json";
  run_pipeline(cfg);
  std::string obj = read_file(cfg.out_dir + "/roads.obj");
  CHECK(obj.find("vt ") != std::string::npos);
  CHECK(obj.find("mtllib roads.mtl") != std::string::npos);
  std::string mtl = read_file(cfg.out_dir + "/roads.mtl");
  CHECK(mtl.find("map_Kd satellite.png") != std::string::npos);
  // uv inside [0, 1] for geometry inside the ortho extent
  std::istringstream lines(obj);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("vt ", 0) != 0) continue;
    double u, v;
    REQUIRE(std::sscanf(line.c_str(), "vt %lf %lf", &u, &v) == 2);
    CHECK(u >= 0.0);
    CHECK(u <= 1.0);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("network mode writes the 2D network only") {
  std::string dir = temp_dir("roadgen_netmode");
  write_cross_inputs(dir);
  PipelineConfig cfg = cross_config(dir);
  PipelineResult result = run_pipeline(cfg, PipelineMode::network);
  CHECK(fs::exists(cfg.out_dir + "/network.json"));
  CHECK(!fs::exists(cfg.out_dir + "/roads.obj"));
  CHECK(result.lane_graph.llanes.empty());
}

TEST_CASE("profile mode writes per-axis CSVs") {
  std::string dir = temp_dir("roadgen_profmode");
  write_cross_inputs(dir);
  PipelineConfig cfg = cross_config(dir);
  PipelineResult result = run_pipeline(cfg, PipelineMode::profile);
  for (const auto& seg : result.net.seg_axes) {
    std::string csv = read_file(cfg.out_dir + "/profiles/" + seg.id + ".csv");
    CHECK(csv.rfind("s,h,kappa,slope\n", 0) == 0);
  }
}
