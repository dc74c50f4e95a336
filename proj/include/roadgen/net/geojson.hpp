#pragma once

#include <string>

#include "roadgen/net/types.hpp"

namespace roadgen::net {

// FeatureCollection of LineString features with `width` (m) and
// `design_speed` (km/h) properties. Coordinates must be projected planar
// meters; inputs that look geographic (all |x| <= 180, |y| <= 90) are
// rejected.
CenterlineSet load_centerlines_geojson(const std::string& path);
CenterlineSet parse_centerlines_geojson(const std::string& text, const std::string& source_name);

}  // namespace roadgen::net
