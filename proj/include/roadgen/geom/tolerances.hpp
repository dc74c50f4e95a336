#pragma once

namespace roadgen::geom {

// One knob set for every numeric tolerance the geometry layer uses; modules
// thread it through rather than hard-coding constants.
struct ToleranceSet {
  double curve_refine_step = 0.25;   // arc-length table resolution (m)
  double offset_sample_step = 1.0;   // offset polyline sampling (m)
  double dp_epsilon = 0.01;          // boundary compression (m)
  double snap_tolerance = 0.5;       // junction endpoint snap (m)
  double parallel_angle_tol = 1e-3;  // rad; below this, no fillet exists
  double tangency_tol = 1e-6;        // rad; fillet tangency acceptance
  double fit_tolerance = 0.5;        // profile fit max residual (m)
  int max_pieces = 64;
  double mono_eps = 1e-10;           // curvature monotonicity slack
};

}  // namespace roadgen::geom
