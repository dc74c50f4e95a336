#include "roadgen/pipeline/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "roadgen/geom/polygon.hpp"

namespace roadgen::pipeline {

using geom::Point2;
using geom::Point3;

namespace {

constexpr double kMinTriangleArea = 1e-9;

double triangle_area_xy(const Point3& a, const Point3& b, const Point3& c) {
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x));
}

// Append a triangle with counterclockwise winding seen from +z, dropping
// degenerate slivers.
void push_triangle(MeshRegion& region, int a, int b, int c) {
  double area = triangle_area_xy(region.vertices[static_cast<std::size_t>(a)],
                                 region.vertices[static_cast<std::size_t>(b)],
                                 region.vertices[static_cast<std::size_t>(c)]);
  if (std::abs(area) <= kMinTriangleArea) return;
  if (area > 0.0) {
    region.triangles.push_back({a, b, c});
  } else {
    region.triangles.push_back({a, c, b});
  }
}

void apply_uv(MeshRegion& region, const OrthoRef* ortho) {
  if (!ortho) return;
  region.uv.reserve(region.vertices.size());
  for (const auto& v : region.vertices) {
    region.uv.push_back(
        {(v.x - ortho->origin.x) / ortho->width, (v.y - ortho->origin.y) / ortho->height});
  }
}

}  // namespace

MeshRegion fan_triangulate(const std::string& id, const std::vector<Point2>& loop, double z,
                           const Point2& center) {
  MeshRegion region;
  region.id = id;
  region.vertices.reserve(loop.size() + 1);
  for (const auto& p : loop) region.vertices.push_back({p.x, p.y, z});
  region.vertices.push_back({center.x, center.y, z});
  int c = static_cast<int>(loop.size());
  for (int i = 0; i < static_cast<int>(loop.size()); ++i) {
    int j = (i + 1) % static_cast<int>(loop.size());
    push_triangle(region, i, j, c);
  }
  return region;
}

RoadMesh build_mesh(const net::RoadNetwork2D& net, const profile::ProfileSet& profiles,
                    double mesh_step, const OrthoRef* ortho, ExecutionPolicy policy) {
  RoadMesh mesh;
  mesh.regions.resize(net.links.size() + net.intersections.size());

  parallel_for(net.links.size(), policy, [&](std::size_t li) {
    const net::Link& link = net.links[li];
    const geom::ParamCurve& axis = profiles.axis_curves.at(link.seg_axis_id);
    const profile::ProfileCurve& prof = profiles.profiles.at(link.seg_axis_id);
    double total = axis.length();
    double sign = link.side == net::LinkSide::left ? 1.0 : -1.0;

    int count = std::max(1, static_cast<int>(std::round(total / mesh_step)));
    MeshRegion region;
    region.id = "link_" + link.id;
    region.vertices.reserve(2 * (static_cast<std::size_t>(count) + 1));
    for (int k = 0; k <= count; ++k) {
      double s = total * k / count;
      Point2 ap = axis.position(s);
      Point2 bp = ap + sign * (link.width / 2.0) * geom::left_normal(axis.tangent(s));
      if (k == 0) {
        ap = link.from.axis_point;
        bp = link.from.gate_vertex;
      } else if (k == count) {
        ap = link.to.axis_point;
        bp = link.to.gate_vertex;
      }
      double z = prof.elevation_at(s);
      region.vertices.push_back({ap.x, ap.y, z});
      region.vertices.push_back({bp.x, bp.y, z});
    }
    for (int k = 0; k < count; ++k) {
      int a0 = 2 * k, b0 = 2 * k + 1, a1 = 2 * k + 2, b1 = 2 * k + 3;
      push_triangle(region, a0, b0, a1);
      push_triangle(region, b0, b1, a1);
    }
    apply_uv(region, ortho);
    mesh.regions[li] = std::move(region);
  });

  parallel_for(net.intersections.size(), policy, [&](std::size_t xi) {
    const net::Intersection& x = net.intersections[xi];
    double z = 0.0;
    auto it = profiles.intersection_z.find(x.id);
    if (it != profiles.intersection_z.end()) z = it->second.z;

    // Boundary loop with the gate axis points inserted on their gate edges,
    // so link end edges share both vertices with the fan.
    std::map<int, Point2> insert_after;  // boundary position -> axis point
    int n = static_cast<int>(x.boundary.size());
    for (const auto& gate : x.gates) {
      if (gate.vertex_plus >= 0 && (gate.vertex_plus + 1) % n == gate.vertex_minus) {
        insert_after[gate.vertex_plus] = gate.axis_point;
      } else if (gate.vertex_minus >= 0 && (gate.vertex_minus + 1) % n == gate.vertex_plus) {
        insert_after[gate.vertex_minus] = gate.axis_point;
      }
    }
    std::vector<Point2> loop;
    loop.reserve(x.boundary.size() + insert_after.size());
    for (int p = 0; p < n; ++p) {
      loop.push_back(x.boundary[static_cast<std::size_t>(p)]);
      auto ins = insert_after.find(p);
      if (ins != insert_after.end()) loop.push_back(ins->second);
    }
    MeshRegion region = fan_triangulate("intersection_" + x.id, loop, z, x.centroid);
    apply_uv(region, ortho);
    mesh.regions[net.links.size() + xi] = std::move(region);
  });

  return mesh;
}

}  // namespace roadgen::pipeline
