#include "roadgen/pipeline/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "roadgen/errors.hpp"
#include "roadgen/net/build.hpp"
#include "roadgen/net/geojson.hpp"
#include "roadgen/net/serialize.hpp"
#include "roadgen/pipeline/exports.hpp"

namespace roadgen::pipeline {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

void write_report(const PipelineReport& report, const std::string& path) {
  ordered_json doc;
  doc["schema"] = "roadgen-report/1";
  ordered_json counts = ordered_json::object();
  for (const auto& [key, value] : report.counts) counts[key] = value;
  doc["counts"] = std::move(counts);
  ordered_json certs = ordered_json::object();
  for (const auto& [key, value] : report.certificates) certs[key] = value;
  doc["certificates"] = std::move(certs);
  ordered_json timings = ordered_json::array();
  for (const auto& [stage, ms] : report.timings_ms) {
    timings.push_back({{"stage", stage}, {"ms", ms}});
  }
  doc["timings_ms"] = std::move(timings);
  doc["wall_ms"] = report.wall_ms;
  ordered_json warnings = ordered_json::array();
  for (const auto& w : report.warnings) {
    warnings.push_back({{"entity", w.entity}, {"message", w.message}});
  }
  doc["warnings"] = std::move(warnings);

  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot open output file", path);
  out << doc.dump(2) << "\n";
}

namespace {

double fillet_tangency_residual(const net::FilletRecord& rec) {
  auto residual = [&](const geom::Point2& foot, const geom::Point2& curve_tangent) {
    geom::Point2 arc_t = rec.arc.tangent_at(foot);
    double c = std::abs(geom::dot(arc_t, curve_tangent));
    return std::acos(std::clamp(c, -1.0, 1.0));
  };
  return std::max(residual(rec.arc.tangency_a, rec.curve_tangent_a),
                  residual(rec.arc.tangency_b, rec.curve_tangent_b));
}

}  // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg, PipelineMode mode) {
  cfg.validate();
  if (cfg.threads > 0) set_thread_count(cfg.threads);
  ExecutionPolicy policy = ExecutionPolicy::parallel;

  PipelineResult result;
  auto t_begin = std::chrono::steady_clock::now();
  auto stage_start = t_begin;
  auto end_stage = [&](const std::string& name) {
    auto now = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(now - stage_start).count();
    result.report.timings_ms.push_back({name, ms});
    stage_start = now;
  };

  fs::create_directories(cfg.out_dir);

  // ---- ingest + smooth ----
  net::CenterlineSet raw = net::load_centerlines_geojson(cfg.centerlines_path);
  if (cfg.override_u) raw.u = *cfg.override_u;
  if (cfg.override_i) raw.i = *cfg.override_i;
  if (cfg.override_l_dis) raw.l_dis = *cfg.override_l_dis;
  end_stage("load");
  net::CenterlineSet smoothed = net::smooth_centerlines(raw, cfg.build.smooth_spacing);
  end_stage("smooth");

  // ---- 2D semantic network ----
  result.net = net::build_network(smoothed, cfg.build, policy);
  result.net.provenance.source = cfg.centerlines_path;
  end_stage("network");

  result.report.counts["roads"] = static_cast<long long>(raw.roads.size());
  result.report.counts["links"] = static_cast<long long>(result.net.links.size());
  result.report.counts["intersections"] = static_cast<long long>(result.net.intersections.size());
  result.report.counts["seg_axes"] = static_cast<long long>(result.net.seg_axes.size());
  double fillet_max = 0.0;
  for (const auto& rec : result.net.fillets) {
    fillet_max = std::max(fillet_max, fillet_tangency_residual(rec));
  }
  result.report.certificates["fillet_tangency_max_rad"] = fillet_max;

  std::optional<OrthoRef> ortho = load_ortho(cfg.ortho_path);

  if (mode == PipelineMode::network) {
    net::write_network_json(result.net, nullptr, cfg.out_dir + "/network.json");
    end_stage("export");
  } else {
    // ---- terrain ----
    terrain::HeightField hf = terrain::HeightField::load(cfg.heightfield_path);
    end_stage("terrain");
    result.mask = terrain::segment_elevation(hf, result.net, policy, &result.net.warnings);
    result.report.counts["road_cells"] = static_cast<long long>(result.mask.road_cell_count());
    result.report.counts["total_cells"] = static_cast<long long>(result.mask.cell_count());
    end_stage("segmentation");

    // ---- profiles: flatten, fit, stitch ----
    result.profiles = profile::build_profiles(result.net, hf, cfg.prof, policy);
    profile::stitch_junctions(result.net, hf, cfg.prof, result.profiles, policy);
    double kappa_cert = 0.0, slope_cert = 0.0;
    for (const auto& [id, prof] : result.profiles.profiles) {
      kappa_cert = std::max(kappa_cert, prof.max_abs_curvature);
      slope_cert = std::max(slope_cert, prof.max_abs_slope);
    }
    result.report.certificates["max_abs_curvature"] = kappa_cert;
    result.report.certificates["max_abs_slope"] = slope_cert;
    end_stage("profiles");

    if (mode == PipelineMode::profile || cfg.export_profiles) {
      fs::create_directories(cfg.out_dir + "/profiles");
      for (const auto& [id, prof] : result.profiles.profiles) {
        export_profile_csv(prof, cfg.prof.delta_s, cfg.out_dir + "/profiles/" + id + ".csv");
      }
      end_stage("profiles_csv");
    }

    if (mode == PipelineMode::build) {
      // ---- lanes ----
      result.lane_graph = lanes::build_lane_graph(result.net, result.profiles, cfg.lane, policy);
      result.report.counts["llanes"] = static_cast<long long>(result.lane_graph.llanes.size());
      result.report.counts["ilanes"] = static_cast<long long>(result.lane_graph.ilanes.size());
      result.report.counts["connectors"] =
          static_cast<long long>(result.lane_graph.connectors.size());
      end_stage("lanes");

      // ---- mesh + exports ----
      result.mesh = build_mesh(result.net, result.profiles, cfg.mesh_step,
                               ortho ? &*ortho : nullptr, policy);
      end_stage("mesh");
      net::write_network_json(result.net, &result.lane_graph, cfg.out_dir + "/network.json");
      export_obj(result.mesh, cfg.out_dir + "/roads.obj", ortho ? &*ortho : nullptr);
      end_stage("export");
    } else {
      net::write_network_json(result.net, nullptr, cfg.out_dir + "/network.json");
      end_stage("export");
    }
  }

  result.report.warnings = result.net.warnings;
  result.report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t_begin)
          .count();
  write_report(result.report, cfg.out_dir + "/report.json");
  return result;
}

}  // namespace roadgen::pipeline
