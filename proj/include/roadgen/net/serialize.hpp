#pragma once

#include <string>

#include "roadgen/lanes/lanes.hpp"
#include "roadgen/net/types.hpp"

namespace roadgen::net {

// Semantic network JSON (schema "roadgen-network/1"): links, intersections,
// seg_axes, relations, and the lane graph when present. Coordinates are
// rounded to 6 decimals; output is deterministic for identical inputs.
std::string network_to_json(const RoadNetwork2D& net, const lanes::LaneGraph* lane_graph);
void write_network_json(const RoadNetwork2D& net, const lanes::LaneGraph* lane_graph,
                        const std::string& path);

}  // namespace roadgen::net
