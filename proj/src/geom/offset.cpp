#include "roadgen/geom/offset.hpp"

#include <cmath>
#include <vector>

#include "roadgen/errors.hpp"

namespace roadgen::geom {

Polyline offset_polyline(const ParamCurve& curve, double d, Side side, const OffsetOptions& opt) {
  if (d <= 0.0) raise(errc::invalid_params, "offset distance must be positive");
  double sign = (side == Side::left) ? 1.0 : -1.0;
  double total = curve.length();

  std::vector<double> stations;
  int n = std::max(1, static_cast<int>(std::ceil(total / std::max(opt.sample_step, 1e-6))));
  stations.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k < n; ++k) stations.push_back(total * k / n);
  stations.push_back(total);

  std::vector<Point2> out;
  out.reserve(stations.size());
  std::size_t clipped = 0;
  double min_keep = d * (1.0 - opt.validity_rel_tol);
  for (double s : stations) {
    Point2 p = curve.position(s) + sign * d * left_normal(curve.tangent(s));
    // Global validity: points pulled closer than d to any part of the source
    // curve sit inside a self-intersection loop and are clipped.
    double nearest = distance(p, curve.position(curve.project(p)));
    if (nearest < min_keep) {
      ++clipped;
      continue;
    }
    if (out.empty() || distance(out.back(), p) > Polyline::kMinSeparation) out.push_back(p);
  }

  if (clipped > opt.collapse_fraction * static_cast<double>(stations.size()) || out.size() < 2) {
    raise(errc::offset_collapse, "offset distance exceeds curvature radius over most of the curve");
  }
  return Polyline(std::move(out));
}

}  // namespace roadgen::geom
