#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "roadgen/geom/fillet.hpp"
#include "roadgen/geom/types.hpp"

namespace roadgen::net {

struct RoadSpec {
  std::string id;
  geom::Polyline axis;
  double width = 8.0;          // m
  double design_speed = 40.0;  // km/h
  int lanes_per_link = 0;      // 0 = use pipeline default
  double lane_width = 0.0;     // 0 = use pipeline default
};

struct CenterlineSet {
  std::vector<RoadSpec> roads;
  double u = 0.10;      // side-way force coefficient
  double i = 0.05;      // superelevation
  double l_dis = 30.0;  // intersection size (m)
};

enum class LinkSide { left, right };
inline const char* side_suffix(LinkSide s) { return s == LinkSide::left ? "L" : "R"; }

// One trimmed end of a link; gate_vertex sits on the link's boundary and is
// shared bitwise with the intersection polygon.
struct LinkEnd {
  double station = 0.0;  // along the road axis
  geom::Point2 axis_point;
  geom::Point2 gate_vertex;
  std::string intersection_id;  // empty = dead end
};

struct SegAxis {
  std::string id;
  std::string road_id;
  geom::Polyline points;
  std::array<std::string, 2> link_ids;  // left, right
  std::string from_intersection;        // at points.front(); may be empty
  std::string to_intersection;          // at points.back(); may be empty
};

struct Link {
  std::string id;
  std::string seg_axis_id;
  std::string road_id;
  LinkSide side = LinkSide::left;
  geom::Polyline boundary;            // w/2 offset of the seg axis
  std::vector<geom::Point2> polygon;  // seg axis points then reversed boundary
  LinkEnd from;                       // smaller-station end
  LinkEnd to;
  double width = 0.0;
  double design_speed = 0.0;
  int lanes = 1;
  double lane_width = 3.5;
};

// Per-arm record inside an intersection; the "+" link is the first of the
// pair in clockwise boundary order.
struct IntersectionGate {
  std::string road_id;
  std::string plus_link;
  std::string minus_link;
  int vertex_plus = -1;  // indices into boundary
  int vertex_minus = -1;
  geom::Point2 axis_point;
};

struct Intersection {
  std::string id;
  int arms = 0;  // k_i
  std::vector<geom::Point2> boundary;       // clockwise, 2 * arms vertices
  std::vector<std::string> incident_links;  // one per boundary vertex, clockwise
  std::vector<IntersectionGate> gates;
  geom::Point2 centroid;
};

struct RelationEntry {
  std::string intersection;
  std::string link;
  char sign = '+';
};

struct FilletRecord {
  std::string junction;
  geom::Arc arc;
  geom::Point2 curve_tangent_a;  // boundary-curve tangents at the feet
  geom::Point2 curve_tangent_b;
};

struct Warning {
  std::string entity;
  std::string message;
};

struct Provenance {
  std::string source;
  std::map<std::string, double> parameters;
};

struct RoadNetwork2D {
  std::vector<Link> links;
  std::vector<Intersection> intersections;
  std::vector<SegAxis> seg_axes;
  std::vector<RelationEntry> relations;
  std::vector<FilletRecord> fillets;
  std::vector<Warning> warnings;
  Provenance provenance;

  const Link* find_link(const std::string& id) const {
    for (const auto& l : links) {
      if (l.id == id) return &l;
    }
    return nullptr;
  }
  const Intersection* find_intersection(const std::string& id) const {
    for (const auto& x : intersections) {
      if (x.id == id) return &x;
    }
    return nullptr;
  }
  const SegAxis* find_seg_axis(const std::string& id) const {
    for (const auto& a : seg_axes) {
      if (a.id == id) return &a;
    }
    return nullptr;
  }
};

}  // namespace roadgen::net
