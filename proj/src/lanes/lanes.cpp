#include "roadgen/lanes/lanes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "roadgen/errors.hpp"

namespace roadgen::lanes {

using geom::ParamCurve;
using geom::Point2;
using geom::Point3;

namespace {

std::string lane_id(const std::string& link_id, int index) {
  return link_id + ".l" + std::to_string(index);
}

}  // namespace

std::vector<LLane> generate_l_lanes(const net::RoadNetwork2D& net,
                                    const profile::ProfileSet& profiles,
                                    const LaneParams& params) {
  std::vector<LLane> out;
  for (const auto& link : net.links) {
    int lanes = link.lanes > 0 ? link.lanes : params.lanes_per_link;
    double lane_width = link.lane_width > 0.0 ? link.lane_width : params.lane_width;
    if (lanes < 1) raise(errc::invalid_params, "lanes_per_link must be >= 1", link.id);
    if (lane_width <= 0.0) raise(errc::invalid_params, "lane_width must be positive", link.id);
    if (lanes * lane_width > link.width / 2.0 + 1e-9) {
      raise(errc::lane_overflow,
            "lanes do not fit into the half width (" + std::to_string(lanes * lane_width) + " > " +
                std::to_string(link.width / 2.0) + ")",
            link.id);
    }

    const ParamCurve& axis = profiles.axis_curves.at(link.seg_axis_id);
    const profile::ProfileCurve& prof = profiles.profiles.at(link.seg_axis_id);
    double total = axis.length();
    double sign = link.side == net::LinkSide::left ? 1.0 : -1.0;
    bool forward = link.side == net::LinkSide::right;  // right-hand traffic

    int count = std::max(1, static_cast<int>(std::round(total / params.sample_step)));
    for (int index = 1; index <= lanes; ++index) {
      double offset = (index - 0.5) * lane_width;
      std::vector<Point3> pts;
      pts.reserve(static_cast<std::size_t>(count) + 1);
      for (int k = 0; k <= count; ++k) {
        double s = total * k / count;
        Point2 p = axis.position(s) + sign * offset * geom::left_normal(axis.tangent(s));
        pts.push_back({p.x, p.y, prof.elevation_at(s)});
      }
      if (!forward) std::reverse(pts.begin(), pts.end());

      LLane lane;
      lane.id = lane_id(link.id, index);
      lane.link_id = link.id;
      lane.index = index;
      lane.centerline = std::move(pts);
      Point2 t0 = axis.tangent(0.0);
      Point2 t1 = axis.tangent(total);
      lane.start_tangent = forward ? t0 : t1 * -1.0;
      lane.end_tangent = forward ? t1 : t0 * -1.0;
      lane.start_intersection = forward ? link.from.intersection_id : link.to.intersection_id;
      lane.end_intersection = forward ? link.to.intersection_id : link.from.intersection_id;
      if (!lane.start_intersection.empty()) lane.relations.push_back({lane.start_intersection, '-'});
      if (!lane.end_intersection.empty()) lane.relations.push_back({lane.end_intersection, '+'});
      out.push_back(std::move(lane));
    }
  }
  return out;
}

std::vector<ILane> generate_i_lanes(const net::Intersection& intersection,
                                    const std::vector<LLane>& llanes, double intersection_z,
                                    const LaneParams& params) {
  std::vector<ILane> out;
  int m = static_cast<int>(intersection.incident_links.size());
  if (m < 4) return out;  // a dead end spur has nothing to connect

  // lanes by link id, ordered by lane index
  std::map<std::string, std::vector<const LLane*>> by_link;
  for (const auto& lane : llanes) by_link[lane.link_id].push_back(&lane);
  for (auto& [link, lanes] : by_link) {
    std::sort(lanes.begin(), lanes.end(),
              [](const LLane* a, const LLane* b) { return a->index < b->index; });
  }

  // U-turn pairs: each gate's "+" link maps to its own road's "-" link.
  std::map<std::string, std::string> uturn;
  for (const auto& gate : intersection.gates) uturn[gate.plus_link] = gate.minus_link;

  // signs per incident link position
  std::map<std::string, char> sign;
  for (const auto& gate : intersection.gates) {
    sign[gate.plus_link] = '+';
    sign[gate.minus_link] = '-';
  }

  std::set<std::pair<std::string, std::string>> seen;
  int serial = 0;
  // clockwise pairing loop: every incoming ("+") link reaches each outgoing
  // ("-") link after it, wrapping around, except the U-turn onto its own road
  for (int i = 0; i < m; ++i) {
    const std::string& from_link = intersection.incident_links[static_cast<std::size_t>(i)];
    auto sit = sign.find(from_link);
    if (sit == sign.end() || sit->second != '+') continue;
    for (int step = 1; step < m; ++step) {
      int k = (i + step) % m;
      const std::string& to_link = intersection.incident_links[static_cast<std::size_t>(k)];
      auto tit = sign.find(to_link);
      if (tit == sign.end() || tit->second != '-') continue;
      if (uturn[from_link] == to_link) continue;

      auto from_it = by_link.find(from_link);
      auto to_it = by_link.find(to_link);
      if (from_it == by_link.end() || to_it == by_link.end()) continue;
      for (const LLane* from_lane : from_it->second) {
        if (from_lane->end_intersection != intersection.id) continue;
        for (const LLane* to_lane : to_it->second) {
          if (to_lane->start_intersection != intersection.id) continue;
          auto key = std::make_pair(from_lane->id, to_lane->id);
          if (!seen.insert(key).second) continue;

          const Point3& p0 = from_lane->centerline.back();
          const Point3& p1 = to_lane->centerline.front();
          Point3 t0{from_lane->end_tangent.x, from_lane->end_tangent.y, 0.0};
          Point3 t1{to_lane->start_tangent.x, to_lane->start_tangent.y, 0.0};
          ILane lane;
          lane.intersection_id = intersection.id;
          lane.from_llane = from_lane->id;
          lane.to_llane = to_lane->id;
          lane.bezier = geom::cubic_bezier_from_tangents(
              {p0.x, p0.y, intersection_z}, t0, {p1.x, p1.y, intersection_z}, t1,
              params.handle_scale);
          char buf[16];
          std::snprintf(buf, sizeof buf, ".il%03d", serial++);
          lane.id = intersection.id + buf;
          out.push_back(std::move(lane));
        }
      }
    }
  }
  return out;
}

std::vector<Connector> build_connectors(const std::vector<ILane>& ilanes,
                                        const std::vector<LLane>& llanes) {
  std::map<std::string, std::string> lane_link;
  for (const auto& lane : llanes) lane_link[lane.id] = lane.link_id;

  std::map<std::pair<std::string, std::string>, std::string> witness;
  for (const auto& lane : ilanes) {
    auto key = std::make_pair(lane_link.at(lane.from_llane), lane_link.at(lane.to_llane));
    auto it = witness.find(key);
    if (it == witness.end() || lane.id < it->second) witness[key] = lane.id;
  }
  std::vector<Connector> out;
  out.reserve(witness.size());
  for (const auto& [key, ilane] : witness) out.push_back({key.first, key.second, ilane});
  return out;
}

LaneGraph build_lane_graph(const net::RoadNetwork2D& net, const profile::ProfileSet& profiles,
                           const LaneParams& params, ExecutionPolicy policy) {
  LaneGraph graph;
  graph.llanes = generate_l_lanes(net, profiles, params);

  std::vector<std::vector<ILane>> per_intersection(net.intersections.size());
  std::vector<std::string> errors(net.intersections.size());
  parallel_for(net.intersections.size(), policy, [&](std::size_t i) {
    const auto& x = net.intersections[i];
    try {
      double z = 0.0;
      auto it = profiles.intersection_z.find(x.id);
      if (it != profiles.intersection_z.end()) z = it->second.z;
      per_intersection[i] = generate_i_lanes(x, graph.llanes, z, params);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < per_intersection.size(); ++i) {
    if (!errors[i].empty()) {
      raise(errc::invalid_params, errors[i], net.intersections[i].id);
    }
    for (auto& lane : per_intersection[i]) graph.ilanes.push_back(std::move(lane));
  }

  graph.connectors = build_connectors(graph.ilanes, graph.llanes);
  for (const auto& lane : graph.ilanes) {
    graph.successors[lane.from_llane].push_back(lane.to_llane);
  }
  return graph;
}

}  // namespace roadgen::lanes
