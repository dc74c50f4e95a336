#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace roadgen {

enum class errc {
  degenerate_polyline,
  degenerate_axis,
  degenerate_span,
  offset_collapse,
  no_fillet_exists,
  infeasible_fit,
  invalid_params,
  non_convex_intersection,
  lane_overflow,
  format_error,
  missing_georeference,
  out_of_bounds,
  io_error,
};

inline const char* errc_name(errc code) {
  switch (code) {
    case errc::degenerate_polyline: return "DegeneratePolyline";
    case errc::degenerate_axis: return "DegenerateAxis";
    case errc::degenerate_span: return "DegenerateSpan";
    case errc::offset_collapse: return "OffsetCollapse";
    case errc::no_fillet_exists: return "NoFilletExists";
    case errc::infeasible_fit: return "InfeasibleFit";
    case errc::invalid_params: return "InvalidParams";
    case errc::non_convex_intersection: return "NonConvexIntersection";
    case errc::lane_overflow: return "LaneOverflow";
    case errc::format_error: return "FormatError";
    case errc::missing_georeference: return "MissingGeoreference";
    case errc::out_of_bounds: return "OutOfBounds";
    case errc::io_error: return "IoError";
  }
  return "Error";
}

// Single exception type for the whole library. `entity` names the offending
// road / junction / seg axis id when one is known.
class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& message, std::string entity = {})
      : std::runtime_error(entity.empty() ? std::string(errc_name(code)) + ": " + message
                                          : std::string(errc_name(code)) + " [" + entity + "]: " + message),
        code_(code),
        entity_(std::move(entity)) {}

  errc code() const { return code_; }
  const std::string& entity() const { return entity_; }

private:
  errc code_;
  std::string entity_;
};

[[noreturn]] inline void raise(errc code, const std::string& message, std::string entity = {}) {
  throw Error(code, message, std::move(entity));
}

}  // namespace roadgen
