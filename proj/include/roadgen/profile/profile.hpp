#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "roadgen/geom/bspline.hpp"
#include "roadgen/geom/param_curve.hpp"
#include "roadgen/net/types.hpp"
#include "roadgen/parallel.hpp"
#include "roadgen/terrain/heightfield.hpp"

namespace roadgen::profile {

struct ProfileParams {
  double delta_s = 5.0;       // control vector spacing (m)
  double slope_max = 0.08;    // |dh/ds| bound
  double kappa_max = 0.1;     // |curvature| bound in the (s, h) plane
  double dkappa_max = 0.1;    // admission: curvature difference between vectors
  double fit_tolerance = 0.5; // max |residual| (m)
  int max_pieces = 64;
};

// Elevation samples along an axis at (nearly) uniform spacing; candidates
// whose discrete curvature jump or implied slope exceeds the bounds are
// dropped, end stations always retained.
struct ControlVectorSet {
  std::string axis_id;
  double delta_s = 5.0;
  std::vector<double> s;
  std::vector<double> h;
  int n_total = 0;  // index of the last regular sample, <= floor(S / delta_s)
};

// Fitted h(s) with its certificates. Values at pinned ends evaluate to the
// pin exactly.
struct ProfileCurve {
  std::string seg_axis_id;
  geom::PiecewiseBSpline curve;
  double max_abs_curvature = 0.0;
  double max_abs_slope = 0.0;
  std::optional<double> pin_start_z;
  std::optional<double> pin_end_z;

  double elevation_at(double s) const {
    if (pin_start_z && s <= curve.domain_start()) return *pin_start_z;
    if (pin_end_z && s >= curve.domain_end()) return *pin_end_z;
    return curve.value(std::clamp(s, curve.domain_start(), curve.domain_end()));
  }
};

struct IntersectionElevation {
  std::string intersection_id;
  double z = 0.0;
};

// Mean of the sampled elevations at the boundary vertices (Step applied to
// the whole flattened interior).
IntersectionElevation flatten_intersection(const net::Intersection& intersection,
                                           const terrain::HeightField& hf);

ControlVectorSet sample_control_vectors(const geom::ParamCurve& axis,
                                        const terrain::HeightField& hf,
                                        const ProfileParams& params);

ProfileCurve fit_profile(const ControlVectorSet& cv, const ProfileParams& params,
                         std::optional<double> pin_start = std::nullopt,
                         std::optional<double> pin_end = std::nullopt);

// Elevation of any planar point inside a link: the profile value at the
// nearest seg-axis station, hence constant along each cross-section normal.
class LinkElevation {
public:
  LinkElevation(const geom::ParamCurve* axis, const ProfileCurve* prof)
      : axis_(axis), prof_(prof) {}
  double z_at(const geom::Point2& p) const { return prof_->elevation_at(axis_->project(p)); }
  double z_at_station(double s) const { return prof_->elevation_at(s); }

private:
  const geom::ParamCurve* axis_;
  const ProfileCurve* prof_;
};

// All per-axis profiles for a network, fitted independently (parallel per
// seg axis).
struct ProfileSet {
  std::map<std::string, geom::ParamCurve> axis_curves;  // by seg axis id
  std::map<std::string, ProfileCurve> profiles;          // by seg axis id
  std::map<std::string, IntersectionElevation> intersection_z;  // by intersection id
};

ProfileSet build_profiles(const net::RoadNetwork2D& net, const terrain::HeightField& hf,
                          const ProfileParams& params,
                          ExecutionPolicy policy = ExecutionPolicy::parallel);

// Re-fits every profile whose ends touch an intersection with the flattened
// z as a hard interpolation constraint; certificates are re-verified.
void stitch_junctions(const net::RoadNetwork2D& net, const terrain::HeightField& hf,
                      const ProfileParams& params, ProfileSet& profiles,
                      ExecutionPolicy policy = ExecutionPolicy::parallel);

}  // namespace roadgen::profile
