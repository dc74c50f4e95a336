#pragma once

#include "roadgen/geom/param_curve.hpp"
#include "roadgen/geom/types.hpp"

namespace roadgen::geom {

enum class Side { left, right };

struct OffsetOptions {
  double sample_step = 1.0;
  // A sample is clipped when its nearest distance to the source curve falls
  // below d * (1 - validity_rel_tol); this removes self-intersection loops in
  // high-curvature regions.
  double validity_rel_tol = 1e-3;
  // OffsetCollapse when clipping removes more than this fraction of samples.
  double collapse_fraction = 0.5;
};

// Translates the curve by distance d along its normal on the requested side.
// Output points are curve.position(s) + d * normal(s) at regular stations
// (end stations always included); orientation matches the input.
Polyline offset_polyline(const ParamCurve& curve, double d, Side side,
                         const OffsetOptions& opt = {});

}  // namespace roadgen::geom
