#pragma once

#include <map>
#include <string>
#include <vector>

#include "roadgen/lanes/lanes.hpp"
#include "roadgen/net/types.hpp"
#include "roadgen/pipeline/config.hpp"
#include "roadgen/pipeline/mesh.hpp"
#include "roadgen/profile/profile.hpp"
#include "roadgen/terrain/segment.hpp"

namespace roadgen::pipeline {

struct PipelineReport {
  std::map<std::string, long long> counts;
  std::map<std::string, double> certificates;
  std::vector<std::pair<std::string, double>> timings_ms;  // stage order preserved
  std::vector<net::Warning> warnings;
  double wall_ms = 0.0;
};

void write_report(const PipelineReport& report, const std::string& path);

struct PipelineResult {
  PipelineReport report;
  net::RoadNetwork2D net;
  lanes::LaneGraph lane_graph;
  profile::ProfileSet profiles;
  terrain::RoadMask mask;
  RoadMesh mesh;
};

// Which stages to run: `network` stops after the 2D build, `profile` after
// the elevation stage, `build` runs everything including mesh and exports.
enum class PipelineMode { network, profile, build };

// Executes the stage chain and writes network.json / roads.obj /
// profiles/*.csv / report.json into the configured output directory. Aborts
// on the first hard error; warnings are collected into the report.
PipelineResult run_pipeline(const PipelineConfig& cfg, PipelineMode mode = PipelineMode::build);

}  // namespace roadgen::pipeline
