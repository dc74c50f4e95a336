#include "roadgen/net/geojson.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "roadgen/errors.hpp"

namespace roadgen::net {

using nlohmann::json;

CenterlineSet parse_centerlines_geojson(const std::string& text, const std::string& source_name) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    raise(errc::format_error, std::string("invalid JSON: ") + e.what(), source_name);
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection") {
    raise(errc::format_error, "expected a GeoJSON FeatureCollection", source_name);
  }

  CenterlineSet out;
  if (doc.contains("properties") && doc["properties"].is_object()) {
    const auto& props = doc["properties"];
    out.u = props.value("u", out.u);
    out.i = props.value("i", out.i);
    out.l_dis = props.value("L_dis", out.l_dis);
  }

  bool any_coordinate = false;
  bool looks_geographic = true;
  int index = 0;
  for (const auto& feature : doc.value("features", json::array())) {
    if (feature.value("type", "") != "Feature") continue;
    const auto& geometry = feature.value("geometry", json());
    if (!geometry.is_object() || geometry.value("type", "") != "LineString") {
      raise(errc::format_error, "only LineString features are supported", source_name);
    }
    RoadSpec road;
    const auto& props = feature.value("properties", json::object());
    road.id = props.contains("id") && props["id"].is_string()
                  ? props["id"].get<std::string>()
                  : "r" + std::to_string(index);
    road.width = props.value("width", 8.0);
    road.design_speed = props.value("design_speed", 40.0);
    road.lanes_per_link = props.value("lanes", 0);
    road.lane_width = props.value("lane_width", 0.0);
    if (road.width <= 0.0) raise(errc::format_error, "width must be positive", road.id);
    if (road.design_speed < 0.0) raise(errc::format_error, "design_speed must be >= 0", road.id);

    std::vector<geom::Point2> pts;
    for (const auto& coord : geometry.value("coordinates", json::array())) {
      if (!coord.is_array() || coord.size() < 2) {
        raise(errc::format_error, "coordinates must be [x, y] arrays", road.id);
      }
      geom::Point2 p{coord[0].get<double>(), coord[1].get<double>()};
      if (!geom::finite(p)) raise(errc::format_error, "non-finite coordinate", road.id);
      any_coordinate = true;
      if (std::abs(p.x) > 180.0 || std::abs(p.y) > 90.0) looks_geographic = false;
      pts.push_back(p);
    }
    if (pts.size() < 2) raise(errc::format_error, "LineString needs at least 2 points", road.id);
    road.axis = geom::Polyline::cleaned(pts);
    if (road.axis.size() < 2) raise(errc::format_error, "degenerate LineString", road.id);
    out.roads.push_back(std::move(road));
    ++index;
  }

  if (out.roads.empty()) raise(errc::format_error, "no roads in input", source_name);
  if (any_coordinate && looks_geographic) {
    raise(errc::format_error,
          "coordinates look geographic (lon/lat); a projected CRS in meters is required",
          source_name);
  }
  return out;
}

CenterlineSet load_centerlines_geojson(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open centerline file", path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_centerlines_geojson(buffer.str(), path);
}

}  // namespace roadgen::net
