#pragma once

#include <optional>
#include <string>

#include "roadgen/lanes/lanes.hpp"
#include "roadgen/net/build.hpp"
#include "roadgen/profile/profile.hpp"

namespace roadgen::pipeline {

// Planar georeference of an ortho image used for UV generation; the image
// itself is referenced, never decoded.
struct OrthoRef {
  geom::Point2 origin;
  double width = 0.0;   // extent in meters
  double height = 0.0;
  std::string image;
};

struct PipelineConfig {
  std::string centerlines_path;
  std::string heightfield_path;
  std::string ortho_path;  // optional
  std::string out_dir = "out";

  net::BuildParams build;
  profile::ProfileParams prof;
  lanes::LaneParams lane;
  // override the values carried by (or defaulted from) the centerline input
  std::optional<double> override_u, override_i, override_l_dis;
  double mesh_step = 2.0;
  int threads = 0;  // 0 = library default
  bool export_profiles = false;

  static PipelineConfig from_json_file(const std::string& path);
  static PipelineConfig from_json_text(const std::string& text, const std::string& source);
  void validate() const;
};

std::optional<OrthoRef> load_ortho(const std::string& path);

}  // namespace roadgen::pipeline
