#pragma once

#include <optional>
#include <vector>

#include "roadgen/geom/types.hpp"

namespace roadgen::geom {

// One clamped cubic B-spline over [s0, s1] in (s, h) function form.
struct BSplinePiece {
  double s0 = 0.0;
  double s1 = 0.0;
  std::vector<double> knots;  // clamped, size ctrl.size() + 4
  std::vector<double> ctrl;

  // Value and derivatives up to order `nd` (<= 3) at s.
  void evaluate(double s, int nd, double out[4]) const;
  double value(double s) const;
};

// C2 chain of cubic B-spline pieces; curvature is monotone within each piece
// and bounded by the kappa_max the curve was fitted with.
class PiecewiseBSpline {
public:
  PiecewiseBSpline() = default;
  explicit PiecewiseBSpline(std::vector<BSplinePiece> pieces) : pieces_(std::move(pieces)) {}

  double domain_start() const { return pieces_.front().s0; }
  double domain_end() const { return pieces_.back().s1; }

  double value(double s) const;
  double slope(double s) const;
  double second_derivative(double s) const;
  // Signed curvature of the graph (s, h(s)): h'' / (1 + h'^2)^(3/2).
  double curvature(double s) const;

  const std::vector<BSplinePiece>& pieces() const { return pieces_; }

  struct Sweep {
    double max_abs_curvature = 0.0;
    double max_abs_slope = 0.0;
    bool curvature_monotone_per_piece = true;
  };
  Sweep sweep(double step, double mono_eps = 1e-10) const;

private:
  const BSplinePiece& piece_for(double s) const;
  std::vector<BSplinePiece> pieces_;
};

struct BSplineFitOptions {
  double kappa_max = 0.1;
  double fit_tolerance = 0.5;  // max |residual| at the samples, meters
  int max_pieces = 64;
  std::optional<double> pin_start;  // hard interpolation constraint h(s_first)
  std::optional<double> pin_end;    // hard interpolation constraint h(s_last)
  std::optional<double> slope_max;  // also bound |h'| during acceptance
  // A piece counts as curvature-monotone when the cumulative reversal
  // (drawdown from a running extremum) stays below this; 0 resolves to
  // 1e-2 * kappa_max, i.e. reversals under 1% of the curvature budget.
  double mono_eps = 0.0;

  double resolved_mono_eps() const { return mono_eps > 0.0 ? mono_eps : 1e-2 * kappa_max; }
};

// Greedy piecewise least squares: each piece spans as many samples as
// possible and is accepted only if its dense curvature sweep is monotone and
// bounded and its residual is within tolerance; on failure the piece boundary
// bisects toward the start. Pieces join with C2 continuity.
PiecewiseBSpline fit_bspline_monotone_curvature(const std::vector<double>& s,
                                                const std::vector<double>& h,
                                                const BSplineFitOptions& opt);

}  // namespace roadgen::geom
