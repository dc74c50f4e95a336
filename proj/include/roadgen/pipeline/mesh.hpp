#pragma once

#include <array>
#include <string>
#include <vector>

#include "roadgen/net/types.hpp"
#include "roadgen/parallel.hpp"
#include "roadgen/pipeline/config.hpp"
#include "roadgen/profile/profile.hpp"

namespace roadgen::pipeline {

struct MeshRegion {
  std::string id;
  std::vector<geom::Point3> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise from +z
  std::vector<geom::Point2> uv;               // empty without an ortho reference
};

struct RoadMesh {
  std::vector<MeshRegion> regions;
};

// Fan triangulation of a closed loop around an interior point; one triangle
// per loop vertex.
MeshRegion fan_triangulate(const std::string& id, const std::vector<geom::Point2>& loop, double z,
                           const geom::Point2& center);

// Links become triangle strips between seg axis and boundary sampled at
// mesh_step; intersections become fans at their flattened elevation with the
// gate axis points inserted so seams share vertices exactly.
RoadMesh build_mesh(const net::RoadNetwork2D& net, const profile::ProfileSet& profiles,
                    double mesh_step, const OrthoRef* ortho = nullptr,
                    ExecutionPolicy policy = ExecutionPolicy::parallel);

}  // namespace roadgen::pipeline
