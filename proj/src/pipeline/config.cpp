#include "roadgen/pipeline/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "roadgen/errors.hpp"

namespace roadgen::pipeline {

using nlohmann::json;

PipelineConfig PipelineConfig::from_json_text(const std::string& text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    raise(errc::format_error, std::string("invalid config JSON: ") + e.what(), source);
  }

  PipelineConfig cfg;
  cfg.centerlines_path = doc.value("centerlines", "");
  cfg.heightfield_path = doc.value("heightfield", "");
  cfg.ortho_path = doc.value("ortho", "");
  cfg.out_dir = doc.value("out", cfg.out_dir);
  cfg.threads = doc.value("threads", 0);
  cfg.export_profiles = doc.value("export_profiles", false);
  cfg.mesh_step = doc.value("mesh_step", cfg.mesh_step);

  const json params = doc.value("params", json::object());
  cfg.build.smooth_spacing = params.value("smooth_spacing", cfg.build.smooth_spacing);
  cfg.build.min_fillet_radius = params.value("min_fillet_radius", cfg.build.min_fillet_radius);
  cfg.build.tol.snap_tolerance = params.value("snap_tolerance", cfg.build.tol.snap_tolerance);
  cfg.build.tol.dp_epsilon = params.value("dp_epsilon", cfg.build.tol.dp_epsilon);
  cfg.build.tol.offset_sample_step =
      params.value("offset_sample_step", cfg.build.tol.offset_sample_step);
  cfg.prof.delta_s = params.value("delta_s", cfg.prof.delta_s);
  cfg.prof.slope_max = params.value("slope_max", cfg.prof.slope_max);
  cfg.prof.kappa_max = params.value("kappa_max", cfg.prof.kappa_max);
  cfg.prof.dkappa_max = params.value("dkappa_max", cfg.prof.dkappa_max);
  cfg.prof.fit_tolerance = params.value("fit_tolerance", cfg.prof.fit_tolerance);
  cfg.prof.max_pieces = params.value("max_pieces", cfg.prof.max_pieces);
  cfg.lane.lane_width = params.value("lane_width", cfg.lane.lane_width);
  cfg.lane.lanes_per_link = params.value("lanes_per_link", cfg.lane.lanes_per_link);
  if (params.contains("u")) cfg.override_u = params["u"].get<double>();
  if (params.contains("i")) cfg.override_i = params["i"].get<double>();
  if (params.contains("L_dis")) cfg.override_l_dis = params["L_dis"].get<double>();
  return cfg;
}

PipelineConfig PipelineConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open config", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str(), path);
}

void PipelineConfig::validate() const {
  if (centerlines_path.empty()) raise(errc::invalid_params, "centerlines path is required");
  if (heightfield_path.empty()) raise(errc::invalid_params, "heightfield path is required");
  if (mesh_step <= 0.0) raise(errc::invalid_params, "mesh_step must be positive");
  if (prof.delta_s <= 0.0) raise(errc::invalid_params, "delta_s must be positive");
  if (prof.slope_max <= 0.0) raise(errc::invalid_params, "slope_max must be positive");
  if (prof.kappa_max <= 0.0) raise(errc::invalid_params, "kappa_max must be positive");
  if (prof.fit_tolerance <= 0.0) raise(errc::invalid_params, "fit_tolerance must be positive");
  if (prof.max_pieces < 1) raise(errc::invalid_params, "max_pieces must be >= 1");
  if (lane.lane_width <= 0.0) raise(errc::invalid_params, "lane_width must be positive");
  if (lane.lanes_per_link < 1) raise(errc::invalid_params, "lanes_per_link must be >= 1");
  if (build.smooth_spacing <= 0.0) raise(errc::invalid_params, "smooth_spacing must be positive");
  if (build.tol.snap_tolerance <= 0.0) raise(errc::invalid_params, "snap_tolerance must be positive");
  if (build.tol.dp_epsilon < 0.0) raise(errc::invalid_params, "dp_epsilon must be >= 0");
}

std::optional<OrthoRef> load_ortho(const std::string& path) {
  if (path.empty()) return std::nullopt;
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open ortho georeference", path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    raise(errc::format_error, std::string("bad ortho georeference: ") + e.what(), path);
  }
  if (!doc.contains("origin") || !doc.contains("extent")) {
    raise(errc::format_error, "ortho georeference needs origin and extent", path);
  }
  OrthoRef ortho;
  ortho.origin = {doc["origin"][0].get<double>(), doc["origin"][1].get<double>()};
  ortho.width = doc["extent"][0].get<double>();
  ortho.height = doc["extent"][1].get<double>();
  ortho.image = doc.value("image", "");
  if (ortho.width <= 0.0 || ortho.height <= 0.0) {
    raise(errc::format_error, "ortho extent must be positive", path);
  }
  return ortho;
}

}  // namespace roadgen::pipeline
