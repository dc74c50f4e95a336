#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "roadgen/geom/bezier.hpp"
#include "roadgen/net/types.hpp"
#include "roadgen/parallel.hpp"
#include "roadgen/profile/profile.hpp"

namespace roadgen::lanes {

struct LaneParams {
  double lane_width = 3.5;
  int lanes_per_link = 1;
  double sample_step = 2.0;  // lane centerline sampling (m)
  double handle_scale = 1.0 / 3.0;
};

// Vehicle trajectory inside a link, offset from the seg axis into the link's
// half; ordered in travel direction (right-hand traffic: the right link runs
// with the axis, the left link against it).
struct LLane {
  std::string id;
  std::string link_id;
  int index = 1;  // 1 = innermost
  std::vector<geom::Point3> centerline;
  std::vector<std::pair<std::string, char>> relations;  // (intersection, sign)
  geom::Point2 start_tangent;  // planar, travel direction
  geom::Point2 end_tangent;
  std::string start_intersection;  // empty = dead end
  std::string end_intersection;
};

// Vehicle trajectory across an intersection joining a "+" lane end to a "-"
// lane start; flat at the intersection elevation.
struct ILane {
  std::string id;
  std::string intersection_id;
  std::string from_llane;
  std::string to_llane;
  geom::CubicBezier3 bezier;
};

struct Connector {
  std::string from_link;
  std::string to_link;
  std::string ilane;  // witness
};

struct LaneGraph {
  std::vector<LLane> llanes;
  std::vector<ILane> ilanes;
  std::vector<Connector> connectors;
  std::map<std::string, std::vector<std::string>> successors;  // llane -> llanes

  const LLane* find_llane(const std::string& id) const {
    for (const auto& l : llanes) {
      if (l.id == id) return &l;
    }
    return nullptr;
  }
};

std::vector<LLane> generate_l_lanes(const net::RoadNetwork2D& net,
                                    const profile::ProfileSet& profiles, const LaneParams& params);

// Pairing loop over the clockwise incident links: each "+" link's lane ends
// connect to every "-" link's lane starts except the U-turn back onto the
// same road; one Bezier per admissible lane pair.
std::vector<ILane> generate_i_lanes(const net::Intersection& intersection,
                                    const std::vector<LLane>& llanes, double intersection_z,
                                    const LaneParams& params);

std::vector<Connector> build_connectors(const std::vector<ILane>& ilanes,
                                        const std::vector<LLane>& llanes);

LaneGraph build_lane_graph(const net::RoadNetwork2D& net, const profile::ProfileSet& profiles,
                           const LaneParams& params,
                           ExecutionPolicy policy = ExecutionPolicy::parallel);

}  // namespace roadgen::lanes
