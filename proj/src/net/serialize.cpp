#include "roadgen/net/serialize.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "roadgen/errors.hpp"

namespace roadgen::net {

using ordered_json = nlohmann::ordered_json;

namespace {

double round6(double v) {
  double r = std::round(v * 1e6) / 1e6;
  return r == 0.0 ? 0.0 : r;  // avoid negative zero
}

ordered_json coords(const std::vector<geom::Point2>& pts) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : pts) arr.push_back({round6(p.x), round6(p.y)});
  return arr;
}

ordered_json coords(const geom::Polyline& poly) { return coords(poly.points()); }

ordered_json coords3(const std::vector<geom::Point3>& pts) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : pts) arr.push_back({round6(p.x), round6(p.y), round6(p.z)});
  return arr;
}

}  // namespace

std::string network_to_json(const RoadNetwork2D& net, const lanes::LaneGraph* lane_graph) {
  ordered_json doc;
  doc["schema"] = "roadgen-network/1";
  doc["crs"] = "local-meters";

  ordered_json links = ordered_json::array();
  for (const auto& link : net.links) {
    ordered_json j;
    j["id"] = link.id;
    j["seg_axis"] = link.seg_axis_id;
    j["road"] = link.road_id;
    j["side"] = side_suffix(link.side);
    j["width"] = round6(link.width);
    j["from_intersection"] = link.from.intersection_id;
    j["to_intersection"] = link.to.intersection_id;
    j["boundary"] = coords(link.boundary);
    j["polygon"] = coords(link.polygon);
    links.push_back(std::move(j));
  }
  doc["links"] = std::move(links);

  ordered_json intersections = ordered_json::array();
  for (const auto& x : net.intersections) {
    ordered_json j;
    j["id"] = x.id;
    j["arms"] = x.arms;
    j["boundary"] = coords(x.boundary);
    j["incident_links"] = x.incident_links;
    intersections.push_back(std::move(j));
  }
  doc["intersections"] = std::move(intersections);

  ordered_json seg_axes = ordered_json::array();
  for (const auto& a : net.seg_axes) {
    ordered_json j;
    j["id"] = a.id;
    j["road"] = a.road_id;
    j["links"] = {a.link_ids[0], a.link_ids[1]};
    j["from_intersection"] = a.from_intersection;
    j["to_intersection"] = a.to_intersection;
    j["points"] = coords(a.points);
    seg_axes.push_back(std::move(j));
  }
  doc["seg_axes"] = std::move(seg_axes);

  ordered_json relations = ordered_json::array();
  for (const auto& r : net.relations) {
    relations.push_back({{"intersection", r.intersection},
                         {"link", r.link},
                         {"sign", std::string(1, r.sign)}});
  }
  doc["relations"] = std::move(relations);

  ordered_json llanes = ordered_json::array();
  ordered_json ilanes = ordered_json::array();
  ordered_json connectors = ordered_json::array();
  if (lane_graph) {
    for (const auto& lane : lane_graph->llanes) {
      ordered_json j;
      j["id"] = lane.id;
      j["link"] = lane.link_id;
      j["index"] = lane.index;
      ordered_json rel = ordered_json::array();
      for (const auto& [intersection, sign] : lane.relations) {
        rel.push_back({{"intersection", intersection}, {"sign", std::string(1, sign)}});
      }
      j["relations"] = std::move(rel);
      j["centerline"] = coords3(lane.centerline);
      llanes.push_back(std::move(j));
    }
    for (const auto& lane : lane_graph->ilanes) {
      ordered_json j;
      j["id"] = lane.id;
      j["intersection"] = lane.intersection_id;
      j["from_llane"] = lane.from_llane;
      j["to_llane"] = lane.to_llane;
      std::vector<geom::Point3> cp(lane.bezier.cp.begin(), lane.bezier.cp.end());
      j["control"] = coords3(cp);
      j["polyline"] = coords3(lane.bezier.sample(16));
      ilanes.push_back(std::move(j));
    }
    for (const auto& c : lane_graph->connectors) {
      connectors.push_back(
          {{"from_link", c.from_link}, {"to_link", c.to_link}, {"ilane", c.ilane}});
    }
  }
  doc["llanes"] = std::move(llanes);
  doc["ilanes"] = std::move(ilanes);
  doc["connectors"] = std::move(connectors);

  ordered_json provenance;
  provenance["source"] = net.provenance.source;
  ordered_json params = ordered_json::object();
  for (const auto& [key, value] : net.provenance.parameters) params[key] = round6(value);
  provenance["parameters"] = std::move(params);
  doc["provenance"] = std::move(provenance);

  ordered_json warnings = ordered_json::array();
  for (const auto& w : net.warnings) {
    warnings.push_back({{"entity", w.entity}, {"message", w.message}});
  }
  doc["warnings"] = std::move(warnings);

  return doc.dump(2) + "\n";
}

void write_network_json(const RoadNetwork2D& net, const lanes::LaneGraph* lane_graph,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot open output file", path);
  out << network_to_json(net, lane_graph);
  if (!out) raise(errc::io_error, "write failed", path);
}

}  // namespace roadgen::net
