#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "roadgen/errors.hpp"
#include "roadgen/net/geojson.hpp"
#include "roadgen/pipeline/pipeline.hpp"

namespace {

using namespace roadgen;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case errc::infeasible_fit:
      return 2;
    case errc::io_error:
      return 3;
    default:
      return 1;  // input / geometry problems
  }
}

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string centerlines;
  std::string heightfield;
  std::string ortho;
  int threads = -1;
  bool export_profiles = false;
  double l_dis = -1, u = -1, i = -1, delta_s = -1, slope_max = -1, kappa_max = -1;
  double lane_width = -1, dp_epsilon = -1, mesh_step = -1, fit_tolerance = -1;
  int lanes_per_link = -1;
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "pipeline config JSON");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_option("--centerlines", opt.centerlines, "centerline GeoJSON");
  cmd->add_option("--heightfield", opt.heightfield, "elevation raster (.asc or .pgm)");
  cmd->add_option("--ortho", opt.ortho, "ortho image georeference JSON");
  cmd->add_option("--threads", opt.threads, "worker threads (0 = hardware default)");
  cmd->add_option("--L-dis", opt.l_dis, "intersection size threshold (m)");
  cmd->add_option("--u", opt.u, "side-way force coefficient");
  cmd->add_option("--i", opt.i, "superelevation");
  cmd->add_option("--delta-s", opt.delta_s, "control vector spacing (m)");
  cmd->add_option("--slope-max", opt.slope_max, "profile slope bound");
  cmd->add_option("--kappa-max", opt.kappa_max, "profile curvature bound (1/m)");
  cmd->add_option("--fit-tolerance", opt.fit_tolerance, "profile fit residual bound (m)");
  cmd->add_option("--lane-width", opt.lane_width, "lane width (m)");
  cmd->add_option("--lanes-per-link", opt.lanes_per_link, "lanes per link");
  cmd->add_option("--dp-epsilon", opt.dp_epsilon, "boundary compression tolerance (m)");
  cmd->add_option("--mesh-step", opt.mesh_step, "mesh sampling step (m)");
  cmd->add_flag("--export-profiles", opt.export_profiles, "write profiles/<segaxis>.csv");
}

pipeline::PipelineConfig resolve(const CommonOptions& opt) {
  pipeline::PipelineConfig cfg;
  if (!opt.config_path.empty()) cfg = pipeline::PipelineConfig::from_json_file(opt.config_path);
  if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
  if (!opt.centerlines.empty()) cfg.centerlines_path = opt.centerlines;
  if (!opt.heightfield.empty()) cfg.heightfield_path = opt.heightfield;
  if (!opt.ortho.empty()) cfg.ortho_path = opt.ortho;
  if (opt.threads >= 0) cfg.threads = opt.threads;
  if (opt.export_profiles) cfg.export_profiles = true;
  if (opt.delta_s > 0) cfg.prof.delta_s = opt.delta_s;
  if (opt.slope_max > 0) cfg.prof.slope_max = opt.slope_max;
  if (opt.kappa_max > 0) cfg.prof.kappa_max = opt.kappa_max;
  if (opt.fit_tolerance > 0) cfg.prof.fit_tolerance = opt.fit_tolerance;
  if (opt.lane_width > 0) cfg.lane.lane_width = opt.lane_width;
  if (opt.lanes_per_link > 0) cfg.lane.lanes_per_link = opt.lanes_per_link;
  if (opt.dp_epsilon >= 0) cfg.build.tol.dp_epsilon = opt.dp_epsilon;
  if (opt.mesh_step > 0) cfg.mesh_step = opt.mesh_step;
  if (opt.u > 0) cfg.override_u = opt.u;
  if (opt.i > 0) cfg.override_i = opt.i;
  if (opt.l_dis > 0) cfg.override_l_dis = opt.l_dis;
  return cfg;
}

int run_mode(const CommonOptions& opt, pipeline::PipelineMode mode) {
  try {
    pipeline::PipelineConfig cfg = resolve(opt);
    pipeline::PipelineResult result = pipeline::run_pipeline(cfg, mode);
    std::printf("ok: %lld links, %lld intersections",
                result.report.counts.count("links") ? result.report.counts.at("links") : 0,
                result.report.counts.count("intersections")
                    ? result.report.counts.at("intersections")
                    : 0);
    if (result.report.counts.count("ilanes")) {
      std::printf(", %lld ilanes", result.report.counts.at("ilanes"));
    }
    std::printf(" (%.0f ms)\n", result.report.wall_ms);
    for (const auto& w : result.report.warnings) {
      std::fprintf(stderr, "warning [%s] %s\n", w.entity.c_str(), w.message.c_str());
    }
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

// Re-checks the structural invariants of an existing network.json.
int validate_output(const std::string& dir) {
  using nlohmann::json;
  try {
    std::ifstream in(dir + "/network.json");
    if (!in) raise(errc::io_error, "cannot open network.json", dir);
    json doc;
    in >> doc;

    std::set<std::string> link_ids, intersection_ids, seg_ids, llane_ids;
    for (const auto& l : doc["links"]) link_ids.insert(l["id"].get<std::string>());
    for (const auto& x : doc["intersections"]) intersection_ids.insert(x["id"].get<std::string>());
    for (const auto& s : doc["seg_axes"]) seg_ids.insert(s["id"].get<std::string>());
    for (const auto& l : doc["llanes"]) llane_ids.insert(l["id"].get<std::string>());

    int failures = 0;
    auto expect = [&](bool ok, const std::string& what) {
      if (!ok) {
        std::fprintf(stderr, "invariant failed: %s\n", what.c_str());
        ++failures;
      }
    };

    for (const auto& l : doc["links"]) {
      expect(seg_ids.count(l["seg_axis"].get<std::string>()) == 1,
             "link " + l["id"].get<std::string>() + " references a missing seg axis");
      for (const char* key : {"from_intersection", "to_intersection"}) {
        std::string x = l[key].get<std::string>();
        expect(x.empty() || intersection_ids.count(x) == 1,
               "link " + l["id"].get<std::string>() + " references a missing intersection");
      }
    }
    for (const auto& x : doc["intersections"]) {
      int arms = x["arms"].get<int>();
      expect(static_cast<int>(x["boundary"].size()) == 2 * arms,
             "intersection " + x["id"].get<std::string>() + " vertex count != 2k");
      for (const auto& link : x["incident_links"]) {
        expect(link_ids.count(link.get<std::string>()) == 1,
               "intersection " + x["id"].get<std::string>() + " lists a missing link");
      }
      // convexity of the clockwise polygon
      const auto& b = x["boundary"];
      int n = static_cast<int>(b.size());
      bool convex = true;
      double area2 = 0.0;
      for (int i = 0; i < n; ++i) {
        auto p = [&](int k) {
          const auto& v = b[static_cast<std::size_t>((k + n) % n)];
          return std::pair<double, double>(v[0].get<double>(), v[1].get<double>());
        };
        auto [x0, y0] = p(i);
        auto [x1, y1] = p(i + 1);
        auto [x2, y2] = p(i + 2);
        double c = (x1 - x0) * (y2 - y1) - (y1 - y0) * (x2 - x1);
        if (c > 1e-7) convex = false;
        area2 += x0 * y1 - x1 * y0;
      }
      expect(convex && area2 < 0.0,
             "intersection " + x["id"].get<std::string>() + " polygon not convex clockwise");
    }
    // sign balance per intersection
    std::map<std::string, int> plus, minus;
    for (const auto& r : doc["relations"]) {
      std::string x = r["intersection"].get<std::string>();
      if (r["sign"].get<std::string>() == "+") {
        plus[x]++;
      } else {
        minus[x]++;
      }
      expect(link_ids.count(r["link"].get<std::string>()) == 1,
             "relation references a missing link");
    }
    for (const auto& x : doc["intersections"]) {
      std::string id = x["id"].get<std::string>();
      expect(plus[id] == x["arms"].get<int>() && minus[id] == x["arms"].get<int>(),
             "intersection " + id + " sign balance");
    }
    for (const auto& lane : doc["ilanes"]) {
      expect(llane_ids.count(lane["from_llane"].get<std::string>()) == 1 &&
                 llane_ids.count(lane["to_llane"].get<std::string>()) == 1,
             "ilane " + lane["id"].get<std::string>() + " references missing lanes");
    }

    if (failures == 0) {
      std::printf("ok: all invariants hold\n");
      return 0;
    }
    std::fprintf(stderr, "%d invariant(s) failed\n", failures);
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"road network compiler: 2D semantics, 3D surfaces and lane graphs from GIS data"};
  app.require_subcommand(1);

  CommonOptions build_opt, network_opt, profile_opt;
  std::string validate_dir;

  CLI::App* build = app.add_subcommand("build", "run the full pipeline");
  add_common(build, build_opt);
  CLI::App* network = app.add_subcommand("network", "2D semantic network only");
  add_common(network, network_opt);
  CLI::App* profile = app.add_subcommand("profile", "elevation profiles only, CSV out");
  add_common(profile, profile_opt);
  CLI::App* validate = app.add_subcommand("validate", "invariant suite on existing outputs");
  validate->add_option("--dir", validate_dir, "output directory to validate")->required();

  CLI11_PARSE(app, argc, argv);

  if (build->parsed()) return run_mode(build_opt, roadgen::pipeline::PipelineMode::build);
  if (network->parsed()) return run_mode(network_opt, roadgen::pipeline::PipelineMode::network);
  if (profile->parsed()) return run_mode(profile_opt, roadgen::pipeline::PipelineMode::profile);
  if (validate->parsed()) return validate_output(validate_dir);
  return 1;
}
