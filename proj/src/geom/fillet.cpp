#include "roadgen/geom/fillet.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "roadgen/errors.hpp"
#include "roadgen/geom/polygon.hpp"

namespace roadgen::geom {

namespace {

struct Seed {
  bool found = false;
  double sa = 0.0;
  double sb = 0.0;
  double dist = std::numeric_limits<double>::max();
};

std::vector<Point2> sample_curve(const ParamCurve& c, double step, std::vector<double>* stations) {
  int n = std::max(2, static_cast<int>(std::ceil(c.length() / step)) + 1);
  std::vector<Point2> pts(static_cast<std::size_t>(n));
  stations->resize(pts.size());
  for (int i = 0; i < n; ++i) {
    double s = c.length() * i / (n - 1);
    (*stations)[static_cast<std::size_t>(i)] = s;
    pts[static_cast<std::size_t>(i)] = c.position(s);
  }
  return pts;
}

// Seed at the first crossing of the sampled curves, or at the closest
// approach when they do not cross.
Seed find_seed(const ParamCurve& a, const ParamCurve& b) {
  double step = std::clamp(std::min(a.length(), b.length()) / 64.0, 0.05, 2.0);
  std::vector<double> sa, sb;
  std::vector<Point2> pa = sample_curve(a, step, &sa);
  std::vector<Point2> pb = sample_curve(b, step, &sb);

  Seed seed;
  for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
    for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
      SegIntersection x = segment_intersection(pa[i], pa[i + 1], pb[j], pb[j + 1]);
      if (x.hit) {
        seed.found = true;
        seed.sa = sa[i] + (sa[i + 1] - sa[i]) * x.t;
        seed.sb = sb[j] + (sb[j + 1] - sb[j]) * x.u;
        seed.dist = 0.0;
        return seed;
      }
    }
  }
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) {
      double d = distance(pa[i], pb[j]);
      if (d < seed.dist) {
        seed.dist = d;
        seed.sa = sa[i];
        seed.sb = sb[j];
        seed.found = true;
      }
    }
  }
  return seed;
}

struct Candidate {
  bool valid = false;
  double sa = 0.0, sb = 0.0;
  Point2 center;
};

// Solves A(sa) + R*na(sa) == B(sb) + R*nb(sb) by damped Newton with a
// finite-difference Jacobian; na/nb are the (signed) left normals.
Candidate solve_center(const ParamCurve& a, const ParamCurve& b, double radius, double sign_a,
                       double sign_b, double sa0, double sb0, const FilletOptions& opt) {
  Candidate cand;
  auto offset_point = [&](const ParamCurve& c, double s, double sign) {
    return c.position(s) + sign * radius * left_normal(c.tangent(s));
  };
  auto residual = [&](double sa, double sb) {
    return offset_point(a, sa, sign_a) - offset_point(b, sb, sign_b);
  };

  double sa = sa0, sb = sb0;
  double ha = std::max(1e-5, a.length() * 1e-7);
  double hb = std::max(1e-5, b.length() * 1e-7);
  double tol = opt.newton_tol * std::max(1.0, radius);
  bool converged = false;
  for (int it = 0; it < opt.max_iterations; ++it) {
    Point2 f = residual(sa, sb);
    if (norm(f) <= tol) {
      converged = true;
      break;
    }
    Point2 ca0 = offset_point(a, std::clamp(sa - ha, 0.0, a.length()), sign_a);
    Point2 ca1 = offset_point(a, std::clamp(sa + ha, 0.0, a.length()), sign_a);
    Point2 cb0 = offset_point(b, std::clamp(sb - hb, 0.0, b.length()), sign_b);
    Point2 cb1 = offset_point(b, std::clamp(sb + hb, 0.0, b.length()), sign_b);
    double da = std::clamp(sa + ha, 0.0, a.length()) - std::clamp(sa - ha, 0.0, a.length());
    double db = std::clamp(sb + hb, 0.0, b.length()) - std::clamp(sb - hb, 0.0, b.length());
    Point2 ja = (ca1 - ca0) / da;
    Point2 jb = (cb1 - cb0) / db * -1.0;
    double det = ja.x * jb.y - ja.y * jb.x;
    if (std::abs(det) < 1e-14) return cand;
    double dsa = (-f.x * jb.y + f.y * jb.x) / det;
    double dsb = (-ja.x * f.y + ja.y * f.x) / det;
    double max_step = 0.25 * std::max(a.length(), b.length());
    dsa = std::clamp(dsa, -max_step, max_step);
    dsb = std::clamp(dsb, -max_step, max_step);
    sa = std::clamp(sa + dsa, 0.0, a.length());
    sb = std::clamp(sb + dsb, 0.0, b.length());
  }
  if (!converged && norm(residual(sa, sb)) > tol) return cand;

  // Clamped solutions sitting exactly on a curve end are not true tangencies.
  double end_margin = 1e-7;
  if (sa <= end_margin || sa >= a.length() - end_margin) return cand;
  if (sb <= end_margin || sb >= b.length() - end_margin) return cand;

  cand.valid = true;
  cand.sa = sa;
  cand.sb = sb;
  cand.center = offset_point(a, sa, sign_a);
  return cand;
}

}  // namespace

Arc tangent_circle_fillet(const ParamCurve& a, const ParamCurve& b, double radius,
                          const FilletOptions& opt) {
  if (radius <= 0.0) raise(errc::invalid_params, "fillet radius must be positive");

  Seed seed = find_seed(a, b);
  if (!seed.found || seed.dist > 2.0 * radius) {
    raise(errc::no_fillet_exists, "curves neither cross nor approach within 2R");
  }

  Point2 ta = a.tangent(seed.sa);
  Point2 tb = b.tangent(seed.sb);
  if (std::abs(cross(ta, tb)) < opt.parallel_tol) {
    raise(errc::no_fillet_exists, "curves are parallel at their closest approach");
  }

  std::vector<std::array<double, 2>> combos;
  double side_sign[2] = {+1.0, -1.0};  // left, right
  if (opt.side_a && opt.side_b) {
    combos.push_back({*opt.side_a == Side::left ? 1.0 : -1.0, *opt.side_b == Side::left ? 1.0 : -1.0});
  } else {
    for (double za : side_sign) {
      for (double zb : side_sign) combos.push_back({za, zb});
    }
  }

  Candidate best;
  double best_key = std::numeric_limits<double>::max();
  for (const auto& combo : combos) {
    Candidate c = solve_center(a, b, radius, combo[0], combo[1], seed.sa, seed.sb, opt);
    if (!c.valid) continue;
    double key = c.sa + c.sb;
    bool better = key < best_key - 1e-9 ||
                  (std::abs(key - best_key) <= 1e-9 &&
                   (c.center.x < best.center.x ||
                    (c.center.x == best.center.x && c.center.y < best.center.y)));
    if (!best.valid || better) {
      best = c;
      best_key = key;
    }
  }
  if (!best.valid) {
    raise(errc::no_fillet_exists, "no tangent circle of this radius fits the corner");
  }

  Arc arc;
  arc.center = best.center;
  arc.radius = radius;
  arc.tangency_a = a.position(best.sa);
  arc.tangency_b = b.position(best.sb);
  arc.station_a = best.sa;
  arc.station_b = best.sb;
  arc.start_angle = std::atan2(arc.tangency_a.y - arc.center.y, arc.tangency_a.x - arc.center.x);
  arc.end_angle = std::atan2(arc.tangency_b.y - arc.center.y, arc.tangency_b.x - arc.center.x);
  double sweep = arc.end_angle - arc.start_angle;
  while (sweep > M_PI) sweep -= 2.0 * M_PI;
  while (sweep < -M_PI) sweep += 2.0 * M_PI;
  arc.clockwise = sweep < 0.0;
  return arc;
}

}  // namespace roadgen::geom
