#include "roadgen/net/build.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "roadgen/errors.hpp"
#include "roadgen/geom/douglas_peucker.hpp"
#include "roadgen/geom/offset.hpp"
#include "roadgen/geom/param_curve.hpp"
#include "roadgen/geom/polygon.hpp"

namespace roadgen::net {

using geom::ParamCurve;
using geom::Point2;
using geom::Polyline;

double fillet_radius(double v_kmh, double u, double i) {
  if (u + i <= 0.0) raise(errc::invalid_params, "u + i must be positive");
  if (v_kmh < 0.0) raise(errc::invalid_params, "design speed must be non-negative");
  return v_kmh * v_kmh / (127.0 * (u + i));
}

CenterlineSet smooth_centerlines(const CenterlineSet& raw, double spacing) {
  if (spacing <= 0.0) raise(errc::invalid_params, "smoothing spacing must be positive");
  CenterlineSet out = raw;
  for (auto& road : out.roads) {
    if (road.axis.size() < 2 || road.axis.length() <= 1e-6) {
      raise(errc::degenerate_axis, "axis has no length", road.id);
    }
    ParamCurve curve = ParamCurve::from_polyline(road.axis);
    double total = curve.length();
    int n = std::max(1, static_cast<int>(std::round(total / spacing)));
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n) + 1);
    pts.push_back(road.axis.front());  // endpoints preserved exactly
    for (int k = 1; k < n; ++k) pts.push_back(curve.position(total * k / n));
    pts.push_back(road.axis.back());
    road.axis = Polyline::cleaned(pts);
  }
  return out;
}

std::vector<std::vector<int>> cluster_intersection_points(
    const std::vector<Point2>& points, const std::vector<std::pair<int, int>>& pairs,
    double l_dis) {
  std::vector<int> parent(points.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto unite = [&](int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); };

  for (const auto& pr : pairs) unite(pr.first, pr.second);
  for (std::size_t a = 0; a < points.size(); ++a) {
    for (std::size_t b = a + 1; b < points.size(); ++b) {
      if (geom::distance(points[a], points[b]) < l_dis) {
        unite(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }

  std::map<int, std::vector<int>> by_root;
  for (std::size_t p = 0; p < points.size(); ++p) {
    by_root[find(static_cast<int>(p))].push_back(static_cast<int>(p));
  }
  std::vector<std::vector<int>> clusters;
  clusters.reserve(by_root.size());
  for (auto& [root, members] : by_root) clusters.push_back(std::move(members));
  return clusters;
}

namespace detail {

Intersection assemble_intersection(const std::string& id, const std::vector<GateVertex>& verts,
                                   std::vector<Warning>* warnings) {
  Intersection out;
  out.id = id;

  std::vector<Point2> raw;
  raw.reserve(verts.size());
  for (const auto& v : verts) raw.push_back(v.pos);
  Point2 center = geom::centroid(raw);

  // Clockwise order of the gate vertices around the centroid.
  std::vector<std::size_t> order(verts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    double aa = std::atan2(verts[a].pos.y - center.y, verts[a].pos.x - center.x);
    double ab = std::atan2(verts[b].pos.y - center.y, verts[b].pos.x - center.x);
    if (aa != ab) return aa > ab;
    double da = geom::norm_sq(verts[a].pos - center);
    double db = geom::norm_sq(verts[b].pos - center);
    if (da != db) return da < db;
    return verts[a].link_id < verts[b].link_id;
  });

  out.boundary.reserve(order.size());
  out.incident_links.reserve(order.size());
  for (std::size_t idx : order) {
    out.boundary.push_back(verts[idx].pos);
    out.incident_links.push_back(verts[idx].link_id);
  }
  out.centroid = geom::centroid(out.boundary);
  out.arms = static_cast<int>(verts.size() / 2);

  if (!geom::is_convex_clockwise(out.boundary)) {
    std::string detail = "gate vertices do not form a convex clockwise polygon:";
    for (const auto& p : out.boundary) {
      detail += " (" + std::to_string(p.x) + "," + std::to_string(p.y) + ")";
    }
    raise(errc::non_convex_intersection, detail, id);
  }

  // Pair up each arm's two vertices; the cyclically first one carries "+".
  std::map<int, std::vector<int>> slots;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    slots[verts[order[pos]].arm_slot].push_back(static_cast<int>(pos));
  }
  int n = static_cast<int>(order.size());
  for (auto& [slot, positions] : slots) {
    if (positions.size() != 2) continue;
    int p1 = positions[0];
    int p2 = positions[1];
    bool adjacent = (p2 == p1 + 1) || (p1 == 0 && p2 == n - 1);
    if (!adjacent && warnings) {
      warnings->push_back({id, "gate vertices of one arm are not adjacent on the boundary"});
    }
    int plus_pos = (p1 == 0 && p2 == n - 1) ? p2 : p1;
    int minus_pos = (plus_pos == p1) ? p2 : p1;
    IntersectionGate gate;
    gate.road_id = verts[order[static_cast<std::size_t>(plus_pos)]].road_id;
    gate.plus_link = verts[order[static_cast<std::size_t>(plus_pos)]].link_id;
    gate.minus_link = verts[order[static_cast<std::size_t>(minus_pos)]].link_id;
    gate.vertex_plus = plus_pos;
    gate.vertex_minus = minus_pos;
    gate.axis_point = verts[order[static_cast<std::size_t>(plus_pos)]].axis_point;
    out.gates.push_back(std::move(gate));
  }
  std::sort(out.gates.begin(), out.gates.end(),
            [](const IntersectionGate& a, const IntersectionGate& b) {
              return a.vertex_plus < b.vertex_plus;
            });
  return out;
}

}  // namespace detail

namespace {

struct SplitEvent {
  std::size_t seg;  // segment index into the polyline
  double t;         // parameter within the segment
  Point2 point;
};

// Splits axes where they cross away from endpoints and where another axis'
// endpoint touches their interior; crossing points are inserted exactly into
// both participants so the junction becomes a shared endpoint.
CenterlineSet split_crossings(const CenterlineSet& cl, double snap_tol,
                              std::vector<Warning>* warnings) {
  std::vector<std::vector<SplitEvent>> events(cl.roads.size());

  auto add_event = [&](std::size_t road, std::size_t seg, double t, Point2 p) {
    const auto& pts = cl.roads[road].axis.points();
    // Skip events that coincide with the axis end points.
    if (geom::distance(p, pts.front()) < snap_tol || geom::distance(p, pts.back()) < snap_tol) {
      return;
    }
    events[road].push_back({seg, t, p});
  };

  std::vector<geom::Box2> bboxes(cl.roads.size());
  for (std::size_t r = 0; r < cl.roads.size(); ++r) bboxes[r] = cl.roads[r].axis.bbox();
  auto boxes_near = [&](std::size_t a, std::size_t b, double margin) {
    return bboxes[a].lo.x - margin <= bboxes[b].hi.x &&
           bboxes[b].lo.x - margin <= bboxes[a].hi.x &&
           bboxes[a].lo.y - margin <= bboxes[b].hi.y &&
           bboxes[b].lo.y - margin <= bboxes[a].hi.y;
  };

  for (std::size_t a = 0; a < cl.roads.size(); ++a) {
    const auto& pa = cl.roads[a].axis.points();
    for (std::size_t b = a + 1; b < cl.roads.size(); ++b) {
      if (!boxes_near(a, b, snap_tol)) continue;
      const auto& pb = cl.roads[b].axis.points();
      for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
        for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
          auto hit = geom::segment_intersection(pa[i], pa[i + 1], pb[j], pb[j + 1]);
          if (!hit.hit) continue;
          add_event(a, i, hit.t, hit.point);
          add_event(b, j, hit.u, hit.point);
        }
      }
      // Endpoint of b touching the interior of a (and vice versa).
      for (const Point2& endpoint : {pb.front(), pb.back()}) {
        for (std::size_t i = 0; i + 1 < pa.size(); ++i) {
          double d = geom::point_segment_distance(endpoint, pa[i], pa[i + 1]);
          if (d < snap_tol) {
            Point2 ab = pa[i + 1] - pa[i];
            double t = std::clamp(geom::dot(endpoint - pa[i], ab) / geom::norm_sq(ab), 0.0, 1.0);
            add_event(a, i, t, pa[i] + ab * t);
          }
        }
      }
      for (const Point2& endpoint : {pa.front(), pa.back()}) {
        for (std::size_t j = 0; j + 1 < pb.size(); ++j) {
          double d = geom::point_segment_distance(endpoint, pb[j], pb[j + 1]);
          if (d < snap_tol) {
            Point2 ab = pb[j + 1] - pb[j];
            double t = std::clamp(geom::dot(endpoint - pb[j], ab) / geom::norm_sq(ab), 0.0, 1.0);
            add_event(b, j, t, pb[j] + ab * t);
          }
        }
      }
    }
  }

  CenterlineSet out;
  out.u = cl.u;
  out.i = cl.i;
  out.l_dis = cl.l_dis;
  for (std::size_t r = 0; r < cl.roads.size(); ++r) {
    const RoadSpec& road = cl.roads[r];
    auto& ev = events[r];
    if (ev.empty()) {
      out.roads.push_back(road);
      continue;
    }
    std::sort(ev.begin(), ev.end(), [](const SplitEvent& x, const SplitEvent& y) {
      if (x.seg != y.seg) return x.seg < y.seg;
      return x.t < y.t;
    });
    // Drop near-duplicate events.
    std::vector<SplitEvent> uniq;
    for (const auto& e : ev) {
      if (uniq.empty() || geom::distance(uniq.back().point, e.point) > snap_tol) {
        uniq.push_back(e);
      }
    }

    const auto& pts = road.axis.points();
    std::vector<Point2> piece{pts.front()};
    std::size_t next_event = 0;
    int piece_no = 1;
    auto flush_piece = [&](Point2 endpoint) {
      piece.push_back(endpoint);
      Polyline poly = Polyline::cleaned(piece);
      if (poly.size() >= 2 && poly.length() > snap_tol) {
        RoadSpec sub = road;
        sub.id = road.id + "." + std::to_string(piece_no++);
        sub.axis = std::move(poly);
        out.roads.push_back(std::move(sub));
      } else if (warnings) {
        warnings->push_back({road.id, "crossing split produced a negligible fragment"});
      }
      piece.clear();
      piece.push_back(endpoint);
    };
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      while (next_event < uniq.size() && uniq[next_event].seg == i) {
        flush_piece(uniq[next_event].point);
        ++next_event;
      }
      piece.push_back(pts[i + 1]);
    }
    {
      Polyline poly = Polyline::cleaned(piece);
      if (poly.size() >= 2 && poly.length() > snap_tol) {
        RoadSpec sub = road;
        sub.id = road.id + "." + std::to_string(piece_no);
        sub.axis = std::move(poly);
        out.roads.push_back(std::move(sub));
      } else if (warnings) {
        warnings->push_back({road.id, "crossing split produced a negligible fragment"});
      }
    }
  }
  return out;
}

// Merges 2-arm joints whose outgoing directions are nearly opposite (a road
// recorded as several consecutive polylines) when width and speed match.
CenterlineSet merge_continuations(CenterlineSet cl, double snap_tol, double continuation_angle) {
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < cl.roads.size() && !merged; ++a) {
      for (std::size_t b = a + 1; b < cl.roads.size() && !merged; ++b) {
        RoadSpec& ra = cl.roads[a];
        RoadSpec& rb = cl.roads[b];
        if (ra.width != rb.width || ra.design_speed != rb.design_speed) continue;
        // try all end pairings
        for (int ea = 0; ea < 2 && !merged; ++ea) {
          for (int eb = 0; eb < 2 && !merged; ++eb) {
            Point2 p1 = ea == 0 ? ra.axis.front() : ra.axis.back();
            Point2 p2 = eb == 0 ? rb.axis.front() : rb.axis.back();
            if (geom::distance(p1, p2) > snap_tol) continue;
            // only true 2-arm joints merge; junction nodes stay intact
            int incident = 0;
            for (const auto& other : cl.roads) {
              incident += geom::distance(other.axis.front(), p1) <= snap_tol ? 1 : 0;
              incident += geom::distance(other.axis.back(), p1) <= snap_tol ? 1 : 0;
            }
            if (incident != 2) continue;
            // outgoing directions at the shared point
            const auto& qa = ra.axis.points();
            const auto& qb = rb.axis.points();
            Point2 da = ea == 0 ? geom::normalized(qa[1] - qa[0])
                                : geom::normalized(qa[qa.size() - 2] - qa.back());
            Point2 db = eb == 0 ? geom::normalized(qb[1] - qb[0])
                                : geom::normalized(qb[qb.size() - 2] - qb.back());
            if (geom::angle_between(da, db) < M_PI - continuation_angle) continue;
            // chain: ra oriented ending at the joint, rb starting from it
            std::vector<Point2> chain;
            if (ea == 0) {
              chain.assign(qa.rbegin(), qa.rend());
            } else {
              chain.assign(qa.begin(), qa.end());
            }
            if (eb == 0) {
              chain.insert(chain.end(), qb.begin() + 1, qb.end());
            } else {
              chain.insert(chain.end(), qb.rbegin() + 1, qb.rend());
            }
            RoadSpec joined = ra;
            joined.id = ra.id + "+" + rb.id;
            joined.axis = Polyline::cleaned(chain);
            cl.roads[a] = std::move(joined);
            cl.roads.erase(cl.roads.begin() + static_cast<long>(b));
            merged = true;
          }
        }
      }
    }
  }
  return cl;
}

struct Arm {
  std::size_t road = 0;
  bool at_start = true;
  Point2 direction;  // outgoing
};

struct Node {
  Point2 pos;
  std::vector<Arm> arms;
};

struct RoadGeometry {
  ParamCurve axis;
  Polyline off_left;
  Polyline off_right;
  // outgoing boundary curves per end: [end][side] with side 0 = left of the
  // outgoing direction
  std::optional<ParamCurve> out_left[2];
  std::optional<ParamCurve> out_right[2];
};

struct TangencyPoint {
  Point2 pos;
  std::size_t road = 0;
  bool arm_at_start = true;             // which road end the arm belongs to
  LinkSide road_side = LinkSide::left;  // which road boundary it lies on
  double road_station = 0.0;
};

struct CutChoice {
  double station = 0.0;
  Point2 axis_point;
  Point2 gate_left;
  Point2 gate_right;
  std::string intersection_id;
};

}  // namespace

RoadNetwork2D build_network(const CenterlineSet& input, const BuildParams& params,
                            ExecutionPolicy policy) {
  RoadNetwork2D net;
  if (input.roads.empty()) raise(errc::invalid_params, "no roads in centerline set");
  if (input.u + input.i <= 0.0) raise(errc::invalid_params, "u + i must be positive");
  if (input.l_dis <= 0.0) raise(errc::invalid_params, "L_dis must be positive");
  for (const auto& r : input.roads) {
    if (r.width <= 0.0) raise(errc::invalid_params, "road width must be positive", r.id);
    if (r.design_speed < 0.0) raise(errc::invalid_params, "design speed must be >= 0", r.id);
  }

  CenterlineSet cl = split_crossings(input, params.tol.snap_tolerance, &net.warnings);
  cl = merge_continuations(std::move(cl), params.tol.snap_tolerance, params.continuation_angle);

  // ---- node detection: cluster axis end points ----
  std::size_t n_roads = cl.roads.size();
  std::vector<Point2> endpoints;
  std::vector<std::pair<std::size_t, bool>> endpoint_owner;  // (road, at_start)
  for (std::size_t r = 0; r < n_roads; ++r) {
    endpoints.push_back(cl.roads[r].axis.front());
    endpoint_owner.push_back({r, true});
    endpoints.push_back(cl.roads[r].axis.back());
    endpoint_owner.push_back({r, false});
  }
  std::vector<int> ep_parent(endpoints.size());
  std::iota(ep_parent.begin(), ep_parent.end(), 0);
  std::function<int(int)> ep_find = [&](int x) {
    while (ep_parent[static_cast<std::size_t>(x)] != x) {
      ep_parent[static_cast<std::size_t>(x)] =
          ep_parent[static_cast<std::size_t>(ep_parent[static_cast<std::size_t>(x)])];
      x = ep_parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (std::size_t a = 0; a < endpoints.size(); ++a) {
    for (std::size_t b = a + 1; b < endpoints.size(); ++b) {
      if (geom::distance(endpoints[a], endpoints[b]) <= params.tol.snap_tolerance) {
        ep_parent[static_cast<std::size_t>(ep_find(static_cast<int>(a)))] =
            ep_find(static_cast<int>(b));
      }
    }
  }

  // ---- per-road geometry ----
  std::vector<RoadGeometry> geo(n_roads);
  geom::OffsetOptions off_opt;
  off_opt.sample_step = params.tol.offset_sample_step;
  for (std::size_t r = 0; r < n_roads; ++r) {
    const RoadSpec& road = cl.roads[r];
    try {
      geo[r].axis = ParamCurve::from_polyline(road.axis, params.tol.curve_refine_step);
      geo[r].off_left = geom::offset_polyline(geo[r].axis, road.width / 2.0, geom::Side::left, off_opt);
      geo[r].off_right =
          geom::offset_polyline(geo[r].axis, road.width / 2.0, geom::Side::right, off_opt);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), road.id);
    }
    // Outgoing boundary curves per end, extended straight past the node so
    // blunt corners can place tangency points behind the axis terminus (the
    // source boundaries run through the junction before trimming).
    double ext = std::max(30.0, 2.0 * road.width);
    auto extended = [&](const Polyline& boundary) {
      const auto& pts = boundary.points();
      Point2 dir = geom::normalized(pts[0] - pts[1]);
      std::vector<Point2> out;
      out.reserve(pts.size() + 2);
      out.push_back(pts[0] + dir * ext);
      out.push_back(pts[0] + dir * (ext * 0.5));
      out.insert(out.end(), pts.begin(), pts.end());
      return ParamCurve::from_polyline(Polyline::cleaned(out), params.tol.curve_refine_step);
    };
    geo[r].out_left[0] = extended(geo[r].off_left);
    geo[r].out_right[0] = extended(geo[r].off_right);
    geo[r].out_left[1] = extended(geo[r].off_right.reversed());
    geo[r].out_right[1] = extended(geo[r].off_left.reversed());
  }

  // ---- assemble nodes, arms sorted counterclockwise by outgoing heading ----
  std::map<int, Node> node_map;
  for (std::size_t e = 0; e < endpoints.size(); ++e) {
    int root = ep_find(static_cast<int>(e));
    auto [road, at_start] = endpoint_owner[e];
    Arm arm;
    arm.road = road;
    arm.at_start = at_start;
    const ParamCurve& axis = geo[road].axis;
    arm.direction = at_start ? axis.tangent(0.0) : axis.tangent(axis.length()) * -1.0;
    Node& node = node_map[root];
    node.arms.push_back(arm);
    node.pos = endpoints[e];  // representative; arms coincide within snap
  }
  std::vector<Node> nodes;
  for (auto& [root, node] : node_map) {
    std::sort(node.arms.begin(), node.arms.end(), [](const Arm& a, const Arm& b) {
      double aa = std::atan2(a.direction.y, a.direction.x);
      double ab = std::atan2(b.direction.y, b.direction.x);
      if (aa != ab) return aa < ab;
      return a.road < b.road;
    });
    nodes.push_back(std::move(node));
  }
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) {
    if (a.pos.x != b.pos.x) return a.pos.x < b.pos.x;
    return a.pos.y < b.pos.y;
  });

  // ---- Step 2: corner fillets per node (independent nodes in parallel) ----
  struct NodeFillets {
    std::vector<TangencyPoint> points;                // flat; pairs adjacent
    std::vector<std::pair<geom::Arc, std::array<Point2, 2>>> arcs;  // arc + curve tangents
    std::string error;
    errc error_code = errc::no_fillet_exists;
  };
  std::vector<NodeFillets> node_results(nodes.size());

  parallel_for(nodes.size(), policy, [&](std::size_t ni) {
    const Node& node = nodes[ni];
    NodeFillets& res = node_results[ni];
    std::size_t k = node.arms.size();
    if (k < 2) return;
    for (std::size_t ai = 0; ai < k; ++ai) {
      const Arm& a = node.arms[ai];
      const Arm& b = node.arms[(ai + 1) % k];
      const RoadSpec& ra = cl.roads[a.road];
      const RoadSpec& rb = cl.roads[b.road];
      double r_eff = std::max(std::min(fillet_radius(ra.design_speed, input.u, input.i),
                                       fillet_radius(rb.design_speed, input.u, input.i)),
                              params.min_fillet_radius);
      const ParamCurve& ca = *geo[a.road].out_left[a.at_start ? 0 : 1];
      const ParamCurve& cb = *geo[b.road].out_right[b.at_start ? 0 : 1];

      double wedge = std::atan2(b.direction.y, b.direction.x) -
                     std::atan2(a.direction.y, a.direction.x);
      while (wedge < 0.0) wedge += 2.0 * M_PI;
      bool near_straight = std::abs(wedge - M_PI) < params.straight_skip_angle;
      bool reflex = wedge > M_PI;

      geom::FilletOptions fopt;
      fopt.parallel_tol = params.tol.parallel_angle_tol;
      if (reflex) {
        // outer corner of a bend: the center sits on the road side of both
        // boundaries and the radius must clear the half widths
        fopt.side_a = geom::Side::right;
        fopt.side_b = geom::Side::left;
        r_eff = std::max(r_eff, std::max(ra.width, rb.width) / 2.0 + params.min_fillet_radius);
      } else {
        fopt.side_a = geom::Side::left;
        fopt.side_b = geom::Side::right;
      }
      try {
        geom::Arc arc = geom::tangent_circle_fillet(ca, cb, r_eff, fopt);
        TangencyPoint ta;
        ta.pos = arc.tangency_a;
        ta.road = a.road;
        ta.arm_at_start = a.at_start;
        ta.road_side = a.at_start ? LinkSide::left : LinkSide::right;
        ta.road_station = geo[a.road].axis.project(arc.tangency_a);
        TangencyPoint tb;
        tb.pos = arc.tangency_b;
        tb.road = b.road;
        tb.arm_at_start = b.at_start;
        tb.road_side = b.at_start ? LinkSide::right : LinkSide::left;
        tb.road_station = geo[b.road].axis.project(arc.tangency_b);
        res.points.push_back(ta);
        res.points.push_back(tb);
        res.arcs.push_back({arc, {ca.tangent(arc.station_a), cb.tangent(arc.station_b)}});
      } catch (const Error& e) {
        if (e.code() == errc::no_fillet_exists && near_straight) {
          continue;  // flat through side, no corner exists there
        }
        res.error = std::string(e.what()) + " (roads " + ra.id + " / " + rb.id + ")";
        res.error_code = e.code();
        return;
      }
    }
  });

  std::vector<TangencyPoint> tangency;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::pair<geom::Arc, std::array<Point2, 2>>> arcs;
  std::vector<int> arc_first_point;
  for (std::size_t ni = 0; ni < nodes.size(); ++ni) {
    const NodeFillets& res = node_results[ni];
    if (!res.error.empty()) throw Error(res.error_code, res.error);
    for (std::size_t p = 0; p + 1 < res.points.size(); p += 2) {
      int base = static_cast<int>(tangency.size());
      tangency.push_back(res.points[p]);
      tangency.push_back(res.points[p + 1]);
      pairs.push_back({base, base + 1});
      arcs.push_back(res.arcs[p / 2]);
      arc_first_point.push_back(base);
    }
  }

  // ---- cluster tangency points into intersections ----
  std::vector<Point2> tangency_pos;
  tangency_pos.reserve(tangency.size());
  for (const auto& t : tangency) tangency_pos.push_back(t.pos);
  std::vector<std::vector<int>> clusters =
      cluster_intersection_points(tangency_pos, pairs, input.l_dis);
  std::sort(clusters.begin(), clusters.end(), [&](const auto& a, const auto& b) {
    Point2 ca{0, 0}, cb{0, 0};
    for (int i : a) ca += tangency_pos[static_cast<std::size_t>(i)];
    for (int i : b) cb += tangency_pos[static_cast<std::size_t>(i)];
    ca = ca / static_cast<double>(a.size());
    cb = cb / static_cast<double>(b.size());
    if (ca.x != cb.x) return ca.x < cb.x;
    return ca.y < cb.y;
  });

  // ---- Step 3: trim segment ends; one saved cut per arm per cluster ----
  // cut per (road, end): station + gates
  std::map<std::pair<std::size_t, bool>, CutChoice> cuts;
  std::vector<int> point_cluster(tangency.size(), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (int p : clusters[c]) point_cluster[static_cast<std::size_t>(p)] = static_cast<int>(c);
  }

  struct ClusterArms {
    std::map<std::pair<std::size_t, bool>, std::vector<int>> arm_points;
    Point2 centroid0{0, 0};
  };
  std::vector<ClusterArms> cluster_arms(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (int p : clusters[c]) {
      const TangencyPoint& tp = tangency[static_cast<std::size_t>(p)];
      cluster_arms[c].arm_points[{tp.road, tp.arm_at_start}].push_back(p);
      cluster_arms[c].centroid0 += tp.pos;
    }
    cluster_arms[c].centroid0 = cluster_arms[c].centroid0 / static_cast<double>(clusters[c].size());
  }

  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::string int_id = "I" + std::to_string(c);
    for (auto& [arm_key, pts] : cluster_arms[c].arm_points) {
      auto [road, at_start] = arm_key;
      // pick the cut farther from the centroid; ties keep the smaller station
      int best = pts.front();
      if (pts.size() >= 2) {
        const ParamCurve& axis = geo[road].axis;
        double best_dist = -1.0;
        for (int p : pts) {
          const TangencyPoint& tp = tangency[static_cast<std::size_t>(p)];
          Point2 axis_pt = axis.position(tp.road_station);
          double dist = geom::distance(axis_pt, cluster_arms[c].centroid0);
          const TangencyPoint& bp = tangency[static_cast<std::size_t>(best)];
          if (dist > best_dist + 1e-9 ||
              (std::abs(dist - best_dist) <= 1e-9 && tp.road_station < bp.road_station)) {
            best_dist = dist;
            best = p;
          }
        }
      }
      const TangencyPoint& saved = tangency[static_cast<std::size_t>(best)];
      const ParamCurve& axis = geo[road].axis;
      const RoadSpec& spec = cl.roads[road];
      CutChoice cut;
      cut.station = saved.road_station;
      cut.axis_point = axis.position(cut.station);
      Point2 n = geom::left_normal(axis.tangent(cut.station));
      cut.gate_left = cut.axis_point + n * (spec.width / 2.0);
      cut.gate_right = cut.axis_point - n * (spec.width / 2.0);
      cut.intersection_id = int_id;
      cuts[{road, at_start}] = cut;
    }
  }

  // ---- convexity repair: extend Step-3's farther-cut rule ----
  // An arm next to a skipped (near-straight) corner keeps a shallow cut; its
  // gates can dip inside the hull of deeper neighbours. Pushing that arm's
  // cut outward is the same "save the one that is further" principle, so the
  // polygon is widened until every vertex is convex.
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::string int_id = "I" + std::to_string(c);
    std::vector<std::pair<std::size_t, bool>> arm_keys;
    for (auto& [arm_key, pts] : cluster_arms[c].arm_points) {
      if (cuts.at(arm_key).intersection_id == int_id) arm_keys.push_back(arm_key);
    }
    if (arm_keys.size() < 2) continue;
    for (int iteration = 0; iteration < 200; ++iteration) {
      struct RingPoint {
        Point2 pos;
        std::size_t arm_index;
      };
      std::vector<RingPoint> ring;
      for (std::size_t a = 0; a < arm_keys.size(); ++a) {
        const CutChoice& cut = cuts.at(arm_keys[a]);
        ring.push_back({cut.gate_left, a});
        ring.push_back({cut.gate_right, a});
      }
      Point2 center{0, 0};
      for (const auto& rp : ring) center += rp.pos;
      center = center / static_cast<double>(ring.size());
      std::sort(ring.begin(), ring.end(), [&](const RingPoint& x, const RingPoint& y) {
        double ax = std::atan2(x.pos.y - center.y, x.pos.x - center.x);
        double ay = std::atan2(y.pos.y - center.y, y.pos.x - center.x);
        if (ax != ay) return ax > ay;
        return geom::norm_sq(x.pos - center) < geom::norm_sq(y.pos - center);
      });
      std::set<std::size_t> reflex_arms;
      std::size_t n = ring.size();
      for (std::size_t i = 0; i < n; ++i) {
        Point2 e1 = ring[(i + 1) % n].pos - ring[i].pos;
        Point2 e2 = ring[(i + 2) % n].pos - ring[(i + 1) % n].pos;
        if (geom::cross(e1, e2) > 1e-9 * geom::norm(e1) * geom::norm(e2)) {
          reflex_arms.insert(ring[(i + 1) % n].arm_index);
        }
      }
      if (reflex_arms.empty()) break;
      for (std::size_t a : reflex_arms) {
        auto [road, at_start] = arm_keys[a];
        CutChoice& cut = cuts.at(arm_keys[a]);
        const ParamCurve& axis = geo[road].axis;
        double s = at_start ? cut.station + 2.0 : cut.station - 2.0;
        double arm_station = at_start ? s : axis.length() - s;
        if (arm_station > axis.length() - params.min_seg_length) continue;  // swallowed later
        cut.station = s;
        cut.axis_point = axis.position(s);
        Point2 nrm = geom::left_normal(axis.tangent(s));
        cut.gate_left = cut.axis_point + nrm * (cl.roads[road].width / 2.0);
        cut.gate_right = cut.axis_point - nrm * (cl.roads[road].width / 2.0);
      }
    }
  }

  // ---- swallowed roads: both cuts crossed over ----
  std::vector<bool> swallowed(n_roads, false);
  for (std::size_t r = 0; r < n_roads; ++r) {
    auto it_s = cuts.find({r, true});
    auto it_e = cuts.find({r, false});
    double a = it_s != cuts.end() ? it_s->second.station : 0.0;
    double b = it_e != cuts.end() ? it_e->second.station : geo[r].axis.length();
    if (b - a < params.min_seg_length) {
      swallowed[r] = true;
      net.warnings.push_back(
          {cl.roads[r].id, "segment fully inside intersection region; road dropped"});
    }
  }

  // ---- Step 4: assemble intersections from gate vertices ----
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::string int_id = "I" + std::to_string(c);
    std::vector<detail::GateVertex> verts;
    int slot = 0;
    for (auto& [arm_key, pts] : cluster_arms[c].arm_points) {
      auto [road, at_start] = arm_key;
      if (swallowed[road]) continue;
      const CutChoice& cut = cuts.at({road, at_start});
      if (cut.intersection_id != int_id) continue;
      detail::GateVertex vl;
      vl.pos = cut.gate_left;
      vl.arm_slot = slot;
      vl.link_id = cl.roads[road].id + "." + side_suffix(LinkSide::left);
      vl.road_id = cl.roads[road].id;
      vl.axis_point = cut.axis_point;
      detail::GateVertex vr = vl;
      vr.pos = cut.gate_right;
      vr.link_id = cl.roads[road].id + "." + side_suffix(LinkSide::right);
      verts.push_back(vl);
      verts.push_back(vr);
      ++slot;
    }
    if (verts.size() < 4) {
      if (!verts.empty()) {
        net.warnings.push_back({int_id, "fewer than two arms survive; intersection dropped"});
        for (auto& [arm_key, pts] : cluster_arms[c].arm_points) {
          cuts.erase(arm_key);  // the arm reverts to a dead end
        }
      }
      continue;
    }
    net.intersections.push_back(detail::assemble_intersection(int_id, verts, &net.warnings));
  }

  // ---- fillet records with their owning intersection ----
  for (std::size_t f = 0; f < arcs.size(); ++f) {
    FilletRecord rec;
    int cluster = point_cluster[static_cast<std::size_t>(arc_first_point[f])];
    rec.junction = cluster >= 0 ? "I" + std::to_string(cluster) : "";
    rec.arc = arcs[f].first;
    rec.curve_tangent_a = arcs[f].second[0];
    rec.curve_tangent_b = arcs[f].second[1];
    net.fillets.push_back(rec);
  }

  // ---- Step 5: seg axes and links ----
  std::set<std::string> live_intersections;
  for (const auto& x : net.intersections) live_intersections.insert(x.id);

  for (std::size_t r = 0; r < n_roads; ++r) {
    if (swallowed[r]) continue;
    const RoadSpec& spec = cl.roads[r];
    const ParamCurve& axis = geo[r].axis;
    auto it_s = cuts.find({r, true});
    auto it_e = cuts.find({r, false});
    bool has_start = it_s != cuts.end() && live_intersections.count(it_s->second.intersection_id);
    bool has_end = it_e != cuts.end() && live_intersections.count(it_e->second.intersection_id);
    double a = has_start ? it_s->second.station : 0.0;
    double b = has_end ? it_e->second.station : axis.length();
    if (b - a < params.min_seg_length) continue;

    Point2 start_axis_pt = has_start ? it_s->second.axis_point : axis.position(a);
    Point2 end_axis_pt = has_end ? it_e->second.axis_point : axis.position(b);

    // stations: exact ends plus uniform interior sampling
    int count = std::max(1, static_cast<int>(std::round((b - a) / params.smooth_spacing)));
    std::vector<double> stations;
    stations.reserve(static_cast<std::size_t>(count) + 1);
    for (int k = 0; k <= count; ++k) stations.push_back(a + (b - a) * k / count);

    std::vector<Point2> axis_pts, left_pts, right_pts;
    axis_pts.reserve(stations.size());
    left_pts.reserve(stations.size());
    right_pts.reserve(stations.size());
    for (std::size_t k = 0; k < stations.size(); ++k) {
      double s = stations[k];
      Point2 p = axis.position(s);
      Point2 n = geom::left_normal(axis.tangent(s));
      Point2 gl = p + n * (spec.width / 2.0);
      Point2 gr = p - n * (spec.width / 2.0);
      if (k == 0) {
        p = start_axis_pt;
        if (has_start) {
          gl = it_s->second.gate_left;
          gr = it_s->second.gate_right;
        }
      }
      if (k + 1 == stations.size()) {
        p = end_axis_pt;
        if (has_end) {
          gl = it_e->second.gate_left;
          gr = it_e->second.gate_right;
        }
      }
      axis_pts.push_back(p);
      left_pts.push_back(gl);
      right_pts.push_back(gr);
    }

    Polyline seg_poly = geom::douglas_peucker(Polyline::cleaned(axis_pts), params.tol.dp_epsilon);
    Polyline left_poly = geom::douglas_peucker(Polyline::cleaned(left_pts), params.tol.dp_epsilon);
    Polyline right_poly =
        geom::douglas_peucker(Polyline::cleaned(right_pts), params.tol.dp_epsilon);

    SegAxis seg;
    seg.id = spec.id + ".axis";
    seg.road_id = spec.id;
    seg.points = seg_poly;
    seg.link_ids = {spec.id + ".L", spec.id + ".R"};
    seg.from_intersection = has_start ? it_s->second.intersection_id : "";
    seg.to_intersection = has_end ? it_e->second.intersection_id : "";

    auto make_link = [&](LinkSide side, const Polyline& boundary) {
      Link link;
      link.id = spec.id + "." + side_suffix(side);
      link.seg_axis_id = seg.id;
      link.road_id = spec.id;
      link.side = side;
      link.boundary = boundary;
      link.width = spec.width;
      link.design_speed = spec.design_speed;
      link.lanes = spec.lanes_per_link;
      link.lane_width = spec.lane_width;
      link.polygon.assign(seg_poly.points().begin(), seg_poly.points().end());
      for (auto it = boundary.points().rbegin(); it != boundary.points().rend(); ++it) {
        link.polygon.push_back(*it);
      }
      link.from.station = a;
      link.from.axis_point = start_axis_pt;
      link.from.gate_vertex = side == LinkSide::left ? left_poly.front() : right_poly.front();
      link.from.intersection_id = seg.from_intersection;
      link.to.station = b;
      link.to.axis_point = end_axis_pt;
      link.to.gate_vertex = side == LinkSide::left ? left_poly.back() : right_poly.back();
      link.to.intersection_id = seg.to_intersection;
      return link;
    };
    net.links.push_back(make_link(LinkSide::left, left_poly));
    net.links.push_back(make_link(LinkSide::right, right_poly));
    net.seg_axes.push_back(std::move(seg));
  }

  // ---- relation network from the intersection gates ----
  for (const auto& x : net.intersections) {
    for (const auto& gate : x.gates) {
      net.relations.push_back({x.id, gate.plus_link, '+'});
      net.relations.push_back({x.id, gate.minus_link, '-'});
    }
  }

  net.provenance.parameters["u"] = input.u;
  net.provenance.parameters["i"] = input.i;
  net.provenance.parameters["L_dis"] = input.l_dis;
  net.provenance.parameters["snap_tolerance"] = params.tol.snap_tolerance;
  net.provenance.parameters["dp_epsilon"] = params.tol.dp_epsilon;
  net.provenance.parameters["smooth_spacing"] = params.smooth_spacing;
  return net;
}

}  // namespace roadgen::net
