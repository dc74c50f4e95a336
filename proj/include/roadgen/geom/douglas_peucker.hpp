#pragma once

#include "roadgen/geom/types.hpp"

namespace roadgen::geom {

// Recursive max-deviation simplification. The result is a subsequence of the
// input containing both end points; every dropped point lies within eps of
// the simplified chain. eps == 0 removes exactly-collinear interior points.
Polyline douglas_peucker(const Polyline& poly, double eps);

}  // namespace roadgen::geom
