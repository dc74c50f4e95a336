#pragma once

#include <utility>
#include <vector>

#include "roadgen/geom/tolerances.hpp"
#include "roadgen/net/types.hpp"
#include "roadgen/parallel.hpp"

namespace roadgen::net {

struct BuildParams {
  geom::ToleranceSet tol;
  double smooth_spacing = 2.0;      // centerline resampling step (m)
  double min_fillet_radius = 2.0;   // floor for Eq-style design radii (m)
  double continuation_angle = 0.26; // rad; straighter 2-arm joints merge
  double straight_skip_angle = 0.35;// rad; near-straight corners have no fillet
  double min_seg_length = 1.0;      // roads trimmed below this are swallowed
};

// Design radius of the corner arc from the design speed (km/h), side-way
// force coefficient and superelevation; meters.
double fillet_radius(double v_kmh, double u, double i);

// Resamples every axis along an interpolating spline at uniform arc-length
// spacing; endpoints are preserved exactly so shared junction points stay
// coincident.
CenterlineSet smooth_centerlines(const CenterlineSet& raw, double spacing = 2.0);

// Full 2D semantic network construction: offsets, corner fillets, tangency
// clustering, end trimming, intersection polygons, links and the +/-
// relation network.
RoadNetwork2D build_network(const CenterlineSet& cl, const BuildParams& params = {},
                            ExecutionPolicy policy = ExecutionPolicy::parallel);

// Partition of tangency points into intersections: fillet pairs stay
// together, and points closer than l_dis join transitively.
std::vector<std::vector<int>> cluster_intersection_points(
    const std::vector<geom::Point2>& points, const std::vector<std::pair<int, int>>& pairs,
    double l_dis);

namespace detail {

struct GateVertex {
  geom::Point2 pos;
  int arm_slot = 0;  // vertices sharing a slot belong to one road arm
  std::string link_id;
  std::string road_id;
  geom::Point2 axis_point;
};

// Sorts the gate vertices clockwise around their centroid, verifies
// convexity and assigns the +/- pair per arm (the "+" link comes first in
// clockwise order).
Intersection assemble_intersection(const std::string& id, const std::vector<GateVertex>& verts,
                                   std::vector<Warning>* warnings = nullptr);

}  // namespace detail

}  // namespace roadgen::net
