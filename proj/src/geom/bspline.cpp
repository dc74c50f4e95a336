#include "roadgen/geom/bspline.hpp"

#include <algorithm>
#include <cmath>

#include "roadgen/errors.hpp"
#include "roadgen/geom/linalg.hpp"

namespace roadgen::geom {

namespace {

constexpr int kDegree = 3;

int find_span(const std::vector<double>& knots, int n_ctrl, double s) {
  if (s >= knots[static_cast<std::size_t>(n_ctrl)]) return n_ctrl - 1;
  if (s <= knots[kDegree]) return kDegree;
  int lo = kDegree, hi = n_ctrl;
  while (hi - lo > 1) {
    int mid = (lo + hi) / 2;
    if (s < knots[static_cast<std::size_t>(mid)]) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return lo;
}

// Basis functions and derivatives (The NURBS Book, A2.3). ders[k][j] is the
// k-th derivative of N_{span-3+j} at s.
void basis_derivatives(const std::vector<double>& knots, int span, double s, int nd,
                       double ders[4][4]) {
  double ndu[4][4], a[2][4], left[4], right[4];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= kDegree; ++j) {
    left[j] = s - knots[static_cast<std::size_t>(span + 1 - j)];
    right[j] = knots[static_cast<std::size_t>(span + j)] - s;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for (int j = 0; j <= kDegree; ++j) ders[0][j] = ndu[j][kDegree];

  for (int r = 0; r <= kDegree; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double dd = 0.0;
      int rk = r - k;
      int pk = kDegree - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        dd = a[s2][0] * ndu[rk][pk];
      }
      int j1 = (rk >= -1) ? 1 : -rk;
      int j2 = (r - 1 <= pk) ? k - 1 : kDegree - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        dd += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        dd += a[s2][k] * ndu[r][pk];
      }
      ders[k][r] = dd;
      std::swap(s1, s2);
    }
  }
  double factor = kDegree;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= kDegree; ++j) ders[k][j] *= factor;
    factor *= (kDegree - k);
  }
}

std::vector<double> clamped_knots(double s0, double s1, int interior) {
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(8 + interior));
  for (int i = 0; i < 4; ++i) knots.push_back(s0);
  for (int k = 1; k <= interior; ++k) knots.push_back(s0 + (s1 - s0) * k / (interior + 1));
  for (int i = 0; i < 4; ++i) knots.push_back(s1);
  return knots;
}

double curvature_of(double dh, double d2h) {
  double t = 1.0 + dh * dh;
  return d2h / (t * std::sqrt(t));
}

// Monotone up to fit ripple: the largest drawdown from a running extremum
// must stay within max(abs_eps, 15% of the value range) in one direction. A
// genuine interior extremum has a drawdown on the order of the whole range
// and fails; least-squares micro-reversals pass.
bool monotone_within(const std::vector<double>& vals, double abs_eps) {
  double peak = vals.front(), trough = vals.front();
  double down = 0.0, up = 0.0;
  double lo = vals.front(), hi = vals.front();
  for (double v : vals) {
    peak = std::max(peak, v);
    trough = std::min(trough, v);
    down = std::max(down, peak - v);
    up = std::max(up, v - trough);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double eps = std::max(abs_eps, 0.15 * (hi - lo));
  return down <= eps || up <= eps;
}

// Value and first/second derivative of the interpolating polynomial through
// up to four samples, evaluated at `at`; exact when the data lies on a cubic.
struct LocalState {
  double h = 0.0;
  double dh = 0.0;
  double d2h = 0.0;
};

LocalState polynomial_state(const double* xs, const double* ys, int k, double at) {
  double coef[4], x[4];
  for (int i = 0; i < k; ++i) {
    coef[i] = ys[i];
    x[i] = xs[i];
  }
  for (int j = 1; j < k; ++j) {
    for (int i = k - 1; i >= j; --i) coef[i] = (coef[i] - coef[i - 1]) / (x[i] - x[i - j]);
  }
  double p = coef[k - 1], dp = 0.0, ddp = 0.0;
  for (int i = k - 2; i >= 0; --i) {
    ddp = ddp * (at - x[i]) + 2.0 * dp;
    dp = dp * (at - x[i]) + p;
    p = p * (at - x[i]) + coef[i];
  }
  return {p, dp, ddp};
}

// Smoothest global least-squares spline through the samples that stays
// within `cap` of them: knot count grows geometrically until the tube
// constraint is met, so noisy data is replaced by the lowest-complexity
// curve the tolerance allows. End values are kept exactly.
std::vector<double> smooth_within(const std::vector<double>& s, const std::vector<double>& h,
                                  double cap) {
  std::size_t m = s.size();
  if (m < 4) return h;
  double s0 = s.front();
  double s1 = s.back();
  for (int q = 0; q <= static_cast<int>(m); q = q == 0 ? 2 : q * 2) {
    int n_ctrl = 4 + q;
    if (static_cast<std::size_t>(n_ctrl) > m + 2) break;
    std::vector<double> knots = clamped_knots(s0, s1, q);
    auto fill_row = [&](linalg::Matrix& mat, std::size_t row, double at, int deriv) {
      double ders[4][4];
      int span = find_span(knots, n_ctrl, at);
      basis_derivatives(knots, span, at, deriv, ders);
      for (int j = 0; j <= kDegree; ++j) {
        mat(row, static_cast<std::size_t>(span - kDegree + j)) = ders[deriv][j];
      }
    };
    linalg::Matrix a(m, static_cast<std::size_t>(n_ctrl));
    std::vector<double> y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      fill_row(a, i, s[i], 0);
      y[i] = h[i];
    }
    linalg::Matrix c(2, static_cast<std::size_t>(n_ctrl));
    std::vector<double> d(2, 0.0);
    fill_row(c, 0, s0, 0);
    d[0] = h.front();
    fill_row(c, 1, s1, 0);
    d[1] = h.back();
    std::vector<double> ctrl = linalg::constrained_least_squares(a, y, c, d);
    BSplinePiece probe{s0, s1, knots, ctrl};
    std::vector<double> smoothed(m, 0.0);
    double worst = 0.0;
    bool finite_ok = true;
    for (double v : ctrl) finite_ok = finite_ok && std::isfinite(v);
    if (!finite_ok) continue;
    for (std::size_t i = 0; i < m; ++i) {
      double v[4];
      probe.evaluate(s[i], 0, v);
      smoothed[i] = v[0];
      worst = std::max(worst, std::abs(v[0] - h[i]));
    }
    if (worst <= cap) return smoothed;
  }
  return h;
}

struct PieceAttempt {
  bool accepted = false;          // piece usable as-is or after extremum splits
  bool needs_split = false;       // bounds/residual hold but curvature reverses
  BSplinePiece piece;
  LocalState end_state;
};

// Curvature of `piece` restricted to [a, b], sampled at least as densely as
// the certificate sweeps so the split verdict matches them.
std::vector<double> sub_sweep(const BSplinePiece& piece, double a, double b, double step_hint,
                              int* n_out) {
  int n = std::max(51, static_cast<int>(std::ceil((b - a) / step_hint)) + 1);
  *n_out = n;
  std::vector<double> kappas(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double at = a + (b - a) * i / (n - 1);
    double v[4];
    piece.evaluate(at, 2, v);
    kappas[static_cast<std::size_t>(i)] = curvature_of(v[1], v[2]);
  }
  return kappas;
}

// A real curvature extremum can sit strictly between two samples, where no
// boundary bisection can isolate it. Splitting the accepted spline at the
// extremum keeps the geometry bit-identical (sub-pieces share the knot
// vector and control points) and makes each side monotone.
bool split_monotone(const BSplinePiece& piece, double a, double b, double eps, double step_hint,
                    int depth, std::vector<BSplinePiece>& out) {
  int n = 0;
  std::vector<double> kappas = sub_sweep(piece, a, b, step_hint, &n);
  if (monotone_within(kappas, 0.9 * eps)) {
    BSplinePiece sub = piece;
    sub.s0 = a;
    sub.s1 = b;
    out.push_back(std::move(sub));
    return true;
  }
  if (depth <= 0) return false;

  // Split at the running extremum preceding the deepest reversal, measured
  // in the direction with the smaller total drawdown.
  auto deepest = [&](bool increasing) {
    double best_ext = kappas.front();
    std::size_t best_idx = 0;
    double worst = 0.0;
    std::size_t worst_idx = 0;
    for (std::size_t i = 0; i < kappas.size(); ++i) {
      if ((increasing && kappas[i] > best_ext) || (!increasing && kappas[i] < best_ext)) {
        best_ext = kappas[i];
        best_idx = i;
      }
      double draw = increasing ? best_ext - kappas[i] : kappas[i] - best_ext;
      if (draw > worst) {
        worst = draw;
        worst_idx = best_idx;
      }
    }
    return std::pair<double, std::size_t>(worst, worst_idx);
  };
  auto up = deepest(true);
  auto down = deepest(false);
  std::size_t split_idx = up.first <= down.first ? up.second : down.second;
  split_idx = std::clamp<std::size_t>(split_idx, 1, kappas.size() - 2);
  double split_at = a + (b - a) * static_cast<double>(split_idx) / (n - 1);
  return split_monotone(piece, a, split_at, eps, step_hint, depth - 1, out) &&
         split_monotone(piece, split_at, b, eps, step_hint, depth - 1, out);
}

// One constrained least-squares piece over samples [ja, jb]. Continuity with
// the previous piece is hard (value, slope, second derivative at s0); the
// right end is free but softly anchored to local polynomial estimates of the
// data state, which keeps the chain from drifting off the data without
// biasing exactly-representable inputs.
PieceAttempt try_piece(const std::vector<double>& s, const std::vector<double>& h,
                       const std::vector<double>& accept_h, std::size_t ja, std::size_t jb,
                       const std::optional<LocalState>& join, const BSplineFitOptions& opt,
                       bool is_last) {
  PieceAttempt out;
  std::size_t m = jb - ja + 1;
  double s0 = s[ja];
  double s1 = s[jb];

  int interior = static_cast<int>(std::clamp<std::size_t>((m + 2) / 2, 2, 16));
  int n_ctrl = 4 + interior;
  std::vector<double> knots = clamped_knots(s0, s1, interior);

  auto basis_row = [&](double at, int deriv, linalg::Matrix& mat, std::size_t row) {
    double ders[4][4];
    int span = find_span(knots, n_ctrl, at);
    basis_derivatives(knots, span, at, 3, ders);
    for (int j = 0; j <= kDegree; ++j) {
      mat(row, static_cast<std::size_t>(span - kDegree + j)) = ders[deriv][j];
    }
  };

  std::vector<std::pair<int, double>> hard;  // (derivative order at s0, value)
  if (join) {
    hard = {{0, join->h}, {1, join->dh}, {2, join->d2h}};
  } else {
    if (m == 2) hard = {{2, 0.0}, {3, 0.0}};  // line through two samples
    if (m == 3) hard = {{3, 0.0}};
    if (opt.pin_start) hard.push_back({0, *opt.pin_start});
  }
  bool pin_end_here = is_last && opt.pin_end.has_value();
  std::size_t nc = hard.size() + (pin_end_here ? 1 : 0);
  linalg::Matrix c(nc, static_cast<std::size_t>(n_ctrl));
  std::vector<double> d(nc, 0.0);
  for (std::size_t r = 0; r < hard.size(); ++r) {
    basis_row(s0, hard[r].first, c, r);
    d[r] = hard[r].second;
  }
  if (pin_end_here) {
    basis_row(s1, 0, c, hard.size());
    d[hard.size()] = *opt.pin_end;
  }

  // Rows: samples, end-state anchors, and fairing rows that penalize the
  // third-derivative jump at each interior knot. Anchor targets come from
  // the local interpolating cubic, so data already on a cubic is not biased;
  // fairing rows are identically zero for a single cubic.
  std::size_t n_anchor = 3;
  std::size_t n_jump = static_cast<std::size_t>(interior);
  linalg::Matrix a(m + n_anchor + n_jump, static_cast<std::size_t>(n_ctrl));
  std::vector<double> y(m + n_anchor + n_jump, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    basis_row(s[ja + i], 0, a, i);
    y[i] = h[ja + i];
  }

  auto weighted_row = [&](std::size_t row, int deriv, double at, double tgt, double weight) {
    basis_row(at, deriv, a, row);
    double row_norm = 0.0;
    for (int j = 0; j < n_ctrl; ++j) {
      double v = a(row, static_cast<std::size_t>(j));
      row_norm += v * v;
    }
    row_norm = std::sqrt(row_norm);
    if (row_norm < 1e-300) return;
    double scale = weight / row_norm;
    for (int j = 0; j < n_ctrl; ++j) a(row, static_cast<std::size_t>(j)) *= scale;
    y[row] = tgt * scale;
  };

  std::size_t n_samples = s.size();
  std::size_t window = std::min<std::size_t>(4, n_samples);
  std::size_t wlo = std::min(jb >= 1 ? jb - 1 : 0, n_samples - window);
  LocalState est = polynomial_state(&s[wlo], &h[wlo], static_cast<int>(window), s1);
  // Interpolation across very uneven gaps can oscillate; anchor targets must
  // never demand more slope or curvature than the acceptance allows.
  if (opt.slope_max) {
    double cap = 0.95 * *opt.slope_max;
    est.dh = std::clamp(est.dh, -cap, cap);
  }
  {
    double t = 1.0 + est.dh * est.dh;
    double d2_cap = 0.95 * opt.kappa_max * t * std::sqrt(t);
    est.d2h = std::clamp(est.d2h, -d2_cap, d2_cap);
  }
  std::size_t row = m;
  weighted_row(row++, 0, s1, pin_end_here ? *opt.pin_end : est.h, 3.0);
  weighted_row(row++, 1, s1, est.dh, 2.5);
  weighted_row(row++, 2, s1, est.d2h, 2.0);

  double span_len = (s1 - s0) / (interior + 1);
  for (int k = 0; k < interior; ++k) {
    std::size_t jrow = row + static_cast<std::size_t>(k);
    double mid_l = s0 + span_len * (k + 0.5);
    double mid_r = s0 + span_len * (k + 1.5);
    double dl[4][4], dr[4][4];
    int span_l = find_span(knots, n_ctrl, mid_l);
    int span_r = find_span(knots, n_ctrl, mid_r);
    basis_derivatives(knots, span_l, mid_l, 3, dl);
    basis_derivatives(knots, span_r, mid_r, 3, dr);
    for (int j = 0; j <= kDegree; ++j) {
      a(jrow, static_cast<std::size_t>(span_r - kDegree + j)) += dr[3][j];
      a(jrow, static_cast<std::size_t>(span_l - kDegree + j)) -= dl[3][j];
    }
    double row_norm = 0.0;
    for (int j = 0; j < n_ctrl; ++j) {
      double v = a(jrow, static_cast<std::size_t>(j));
      row_norm += v * v;
    }
    row_norm = std::sqrt(row_norm);
    if (row_norm > 1e-300) {
      double scale = 0.5 / row_norm;
      for (int j = 0; j < n_ctrl; ++j) a(jrow, static_cast<std::size_t>(j)) *= scale;
    }
  }

  out.piece.s0 = s0;
  out.piece.s1 = s1;
  out.piece.knots = std::move(knots);
  out.piece.ctrl = linalg::constrained_least_squares(a, y, c, d);

  for (double v : out.piece.ctrl) {
    if (!std::isfinite(v)) return out;
  }

  // Residual acceptance at the samples, always against the raw ordinates.
  for (std::size_t i = 0; i < m; ++i) {
    double v[4];
    out.piece.evaluate(s[ja + i], 0, v);
    if (std::abs(v[0] - accept_h[ja + i]) > opt.fit_tolerance + 1e-9) return out;
  }

  // Dense sweep: bounded, piecewise-monotone curvature (and bounded slope
  // when requested).
  double min_gap = s1 - s0;
  for (std::size_t i = ja + 1; i <= jb; ++i) min_gap = std::min(min_gap, s[i] - s[i - 1]);
  double step = std::max(min_gap / 10.0, (s1 - s0) * 1e-4);
  int nsweep = std::max(51, static_cast<int>(std::ceil((s1 - s0) / step)) + 1);
  std::vector<double> kappas(static_cast<std::size_t>(nsweep));
  for (int i = 0; i < nsweep; ++i) {
    double at = s0 + (s1 - s0) * i / (nsweep - 1);
    double v[4];
    out.piece.evaluate(at, 2, v);
    double kappa = curvature_of(v[1], v[2]);
    kappas[static_cast<std::size_t>(i)] = kappa;
    if (std::abs(kappa) > opt.kappa_max * (1.0 + 1e-9)) return out;
    if (opt.slope_max && std::abs(v[1]) > *opt.slope_max * (1.0 + 1e-9)) return out;
  }
  double v[4];
  out.piece.evaluate(s1, 2, v);
  out.end_state = {v[0], v[1], v[2]};
  if (!monotone_within(kappas, opt.resolved_mono_eps())) {
    out.needs_split = true;
    return out;
  }
  out.accepted = true;
  return out;
}

}  // namespace

void BSplinePiece::evaluate(double s, int nd, double out[4]) const {
  int n_ctrl = static_cast<int>(ctrl.size());
  double ders[4][4];
  int span = find_span(knots, n_ctrl, std::clamp(s, s0, s1));
  basis_derivatives(knots, span, std::clamp(s, s0, s1), nd, ders);
  for (int k = 0; k <= nd; ++k) {
    double sum = 0.0;
    for (int j = 0; j <= kDegree; ++j) {
      sum += ders[k][j] * ctrl[static_cast<std::size_t>(span - kDegree + j)];
    }
    out[k] = sum;
  }
}

double BSplinePiece::value(double s) const {
  double v[4];
  evaluate(s, 0, v);
  return v[0];
}

const BSplinePiece& PiecewiseBSpline::piece_for(double s) const {
  std::size_t lo = 0, hi = pieces_.size() - 1;
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (s > pieces_[mid].s1) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return pieces_[lo];
}

double PiecewiseBSpline::value(double s) const {
  double v[4];
  piece_for(s).evaluate(s, 0, v);
  return v[0];
}

double PiecewiseBSpline::slope(double s) const {
  double v[4];
  piece_for(s).evaluate(s, 1, v);
  return v[1];
}

double PiecewiseBSpline::second_derivative(double s) const {
  double v[4];
  piece_for(s).evaluate(s, 2, v);
  return v[2];
}

double PiecewiseBSpline::curvature(double s) const {
  double v[4];
  piece_for(s).evaluate(s, 2, v);
  return curvature_of(v[1], v[2]);
}

PiecewiseBSpline::Sweep PiecewiseBSpline::sweep(double step, double mono_eps) const {
  Sweep r;
  for (const auto& piece : pieces_) {
    int n = std::max(51, static_cast<int>(std::ceil((piece.s1 - piece.s0) / step)) + 1);
    std::vector<double> kappas(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      double at = piece.s0 + (piece.s1 - piece.s0) * i / (n - 1);
      double v[4];
      piece.evaluate(at, 2, v);
      double kappa = curvature_of(v[1], v[2]);
      kappas[static_cast<std::size_t>(i)] = kappa;
      r.max_abs_curvature = std::max(r.max_abs_curvature, std::abs(kappa));
      r.max_abs_slope = std::max(r.max_abs_slope, std::abs(v[1]));
    }
    if (!monotone_within(kappas, mono_eps)) r.curvature_monotone_per_piece = false;
  }
  return r;
}

PiecewiseBSpline fit_bspline_monotone_curvature(const std::vector<double>& s,
                                                const std::vector<double>& h,
                                                const BSplineFitOptions& opt) {
  if (s.size() != h.size()) raise(errc::invalid_params, "abscissae/ordinates size mismatch");
  if (s.size() < 2) raise(errc::invalid_params, "need at least 2 samples to fit");
  if (opt.kappa_max <= 0.0) raise(errc::invalid_params, "kappa_max must be positive");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (!(s[i] > s[i - 1])) raise(errc::invalid_params, "sample abscissae must be strictly increasing");
  }

  // End pins fold into the data as a linear ramp, so the end states the
  // pieces interpolate agree with the pinned values exactly and interior
  // values move by at most the end corrections.
  std::vector<double> target = h;
  if (opt.pin_start || opt.pin_end) {
    double span = s.back() - s.front();
    double d0 = opt.pin_start ? *opt.pin_start - h.front() : 0.0;
    double d1 = opt.pin_end ? *opt.pin_end - h.back() : 0.0;
    for (std::size_t i = 0; i < target.size(); ++i) {
      target[i] += d0 + (d1 - d0) * (s[i] - s.front()) / span;
    }
  }

  auto run = [&](const std::vector<double>& fit_h) {
    std::vector<BSplinePiece> pieces;
    std::optional<LocalState> state;
    std::size_t ja = 0;
    std::size_t last = s.size() - 1;
    while (ja < last) {
      if (static_cast<int>(pieces.size()) >= opt.max_pieces) {
        raise(errc::infeasible_fit, "piece budget exhausted before covering all samples");
      }
      std::size_t jb = last;
      for (;;) {
        PieceAttempt attempt = try_piece(s, fit_h, target, ja, jb, state, opt, jb == last);
        if (attempt.accepted) {
          pieces.push_back(std::move(attempt.piece));
          state = attempt.end_state;
          ja = jb;
          break;
        }
        // Bounds and residual hold but curvature reverses inside: keep the
        // geometry and break it into monotone sub-pieces at the extrema.
        if (attempt.needs_split) {
          std::vector<BSplinePiece> subs;
          double min_gap = attempt.piece.s1 - attempt.piece.s0;
          for (std::size_t i = ja + 1; i <= jb; ++i) min_gap = std::min(min_gap, s[i] - s[i - 1]);
          if (split_monotone(attempt.piece, attempt.piece.s0, attempt.piece.s1,
                             opt.resolved_mono_eps(), min_gap / 10.0, 6, subs)) {
            if (pieces.size() + subs.size() > static_cast<std::size_t>(opt.max_pieces)) {
              raise(errc::infeasible_fit, "piece budget exhausted before covering all samples");
            }
            for (auto& sub : subs) pieces.push_back(std::move(sub));
            state = attempt.end_state;
            ja = jb;
            break;
          }
        }
        if (jb - ja <= 1) {
          raise(errc::infeasible_fit,
                "no piece satisfies the curvature bound within the residual tolerance");
        }
        jb = ja + std::max<std::size_t>(1, (jb - ja) / 2);
      }
    }
    return PiecewiseBSpline(std::move(pieces));
  };

  // Raw samples first; data too rough for a bounded-curvature fit gets
  // retries against smoothed targets that stay inside a growing fraction of
  // the tolerance band (residuals are always accepted against the raw
  // samples).
  try {
    return run(target);
  } catch (const Error& e) {
    if (e.code() != errc::infeasible_fit) throw;
  }
  try {
    return run(smooth_within(s, target, 0.7 * opt.fit_tolerance));
  } catch (const Error& e) {
    if (e.code() != errc::infeasible_fit) throw;
  }
  return run(smooth_within(s, target, 0.95 * opt.fit_tolerance));
}

}  // namespace roadgen::geom
