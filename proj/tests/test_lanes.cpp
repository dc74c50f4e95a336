#include <cmath>
#include <set>

#include "doctest.h"
#include "roadgen/lanes/lanes.hpp"
#include "roadgen/net/build.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace roadgen;
using namespace roadgen::lanes;
using geom::Point2;
using geom::Point3;

namespace {

struct Scene {
  net::RoadNetwork2D net;
  profile::ProfileSet profiles;
  terrain::HeightField hf;
};

Scene make_scene(const net::CenterlineSet& raw, double margin = 300.0) {
  Scene scene;
  auto cl = net::smooth_centerlines(raw, 2.0);
  scene.net = net::build_network(cl, net::BuildParams{}, ExecutionPolicy::serial);
  scene.hf = fixtures::flat_dem(-margin, -margin, margin, margin, 100.0, 10.0);
  profile::ProfileParams params;
  scene.profiles = profile::build_profiles(scene.net, scene.hf, params, ExecutionPolicy::serial);
  profile::stitch_junctions(scene.net, scene.hf, params, scene.profiles,
                            ExecutionPolicy::serial);
  return scene;
}

// Exhaustive reference enumeration: every "+" lane to every "-" lane of the
// same intersection, skipping U-turns back onto the same road.
std::set<std::pair<std::string, std::string>> oracle_pairs(const net::Intersection& x,
                                                           const std::vector<LLane>& llanes,
                                                           const net::RoadNetwork2D& net) {
  std::set<std::pair<std::string, std::string>> out;
  auto road_of = [&](const std::string& link_id) { return net.find_link(link_id)->road_id; };
  for (const auto& from : llanes) {
    if (from.end_intersection != x.id) continue;
    for (const auto& to : llanes) {
      if (to.start_intersection != x.id) continue;
      if (road_of(from.link_id) == road_of(to.link_id)) continue;  // U-turn
      out.insert({from.id, to.id});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("single lane sits half a lane width from the axis") {
  Scene scene = make_scene(fixtures::make_isolated(150.0));
  LaneParams params;
  auto llanes = generate_l_lanes(scene.net, scene.profiles, params);
  REQUIRE(llanes.size() == 2);
  for (const auto& lane : llanes) {
    const auto& seg = *scene.net.find_seg_axis(scene.net.find_link(lane.link_id)->seg_axis_id);
    auto axis = geom::ParamCurve::from_polyline(seg.points);
    for (const auto& p : lane.centerline) {
      double d = geom::distance(Point2{p.x, p.y}, axis.position(axis.project({p.x, p.y})));
      CHECK(d == doctest::Approx(1.75).epsilon(0.01));
    }
  }
}

TEST_CASE("lanes that do not fit the half width raise LaneOverflow") {
  Scene scene = make_scene(fixtures::make_isolated(150.0));
  LaneParams params;
  params.lanes_per_link = 2;  // 2 * 3.5 = 7 > 4
  CHECK_THROWS_AS(generate_l_lanes(scene.net, scene.profiles, params), Error);
}

TEST_CASE("straight link yields a straight parallel lane") {
  Scene scene = make_scene(fixtures::make_isolated(150.0));
  LaneParams params;
  auto llanes = generate_l_lanes(scene.net, scene.profiles, params);
  for (const auto& lane : llanes) {
    for (const auto& p : lane.centerline) {
      CHECK(std::abs(std::abs(p.y) - 1.75) < 1e-3);
    }
  }
}

TEST_CASE("left link lanes run against the axis, right link lanes with it") {
  Scene scene = make_scene(fixtures::make_isolated(150.0));
  LaneParams params;
  auto llanes = generate_l_lanes(scene.net, scene.profiles, params);
  for (const auto& lane : llanes) {
    const net::Link* link = scene.net.find_link(lane.link_id);
    double dx = lane.centerline.back().x - lane.centerline.front().x;
    if (link->side == net::LinkSide::right) {
      CHECK(dx > 0);
    } else {
      CHECK(dx < 0);
    }
  }
}

TEST_CASE("four-arm cross with one lane per direction yields 12 I_Lanes") {
  Scene scene = make_scene(fixtures::make_cross());
  LaneGraph graph = build_lane_graph(scene.net, scene.profiles, LaneParams{},
                                     ExecutionPolicy::serial);
  CHECK(graph.llanes.size() == 8);
  CHECK(graph.ilanes.size() == 12);
  CHECK(graph.connectors.size() == 12);

  auto expect = oracle_pairs(scene.net.intersections[0], graph.llanes, scene.net);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& lane : graph.ilanes) got.insert({lane.from_llane, lane.to_llane});
  CHECK(got == expect);
}

TEST_CASE("T intersection with one lane per direction yields 6 I_Lanes") {
  Scene scene = make_scene(fixtures::make_t());
  LaneGraph graph = build_lane_graph(scene.net, scene.profiles, LaneParams{},
                                     ExecutionPolicy::serial);
  CHECK(graph.ilanes.size() == 6);
  auto expect = oracle_pairs(scene.net.intersections[0], graph.llanes, scene.net);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& lane : graph.ilanes) got.insert({lane.from_llane, lane.to_llane});
  CHECK(got == expect);
}

TEST_CASE("two parallel I_Lanes between the same links dedupe to one connector") {
  net::CenterlineSet raw = fixtures::make_cross(200.0, 16.0, 20.0);  // wide enough for 2 lanes
  Scene scene = make_scene(raw);
  LaneParams params;
  params.lanes_per_link = 2;
  LaneGraph graph = build_lane_graph(scene.net, scene.profiles, params, ExecutionPolicy::serial);
  CHECK(graph.ilanes.size() == 48);     // 12 link pairs x 2x2 lanes
  CHECK(graph.connectors.size() == 12); // still one connector per link pair
  // equivalence with the exhaustive enumeration
  auto expect = oracle_pairs(scene.net.intersections[0], graph.llanes, scene.net);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& lane : graph.ilanes) got.insert({lane.from_llane, lane.to_llane});
  CHECK(got == expect);
}

TEST_CASE("I_Lane tangency and elevation") {
  Scene scene = make_scene(fixtures::make_cross());
  LaneGraph graph = build_lane_graph(scene.net, scene.profiles, LaneParams{},
                                     ExecutionPolicy::serial);
  double z_int = scene.profiles.intersection_z.begin()->second.z;
  for (const auto& lane : graph.ilanes) {
    const LLane* from = graph.find_llane(lane.from_llane);
    const LLane* to = graph.find_llane(lane.to_llane);
    REQUIRE(from != nullptr);
    REQUIRE(to != nullptr);
    // endpoint coincidence
    CHECK(geom::distance(lane.bezier.cp[0],
                         Point3{from->centerline.back().x, from->centerline.back().y, z_int}) <
          1e-9);
    // planar tangency within 1e-6 rad at both ends
    Point3 d0 = lane.bezier.derivative(0.0);
    double a0 = geom::angle_between(Point2{d0.x, d0.y}, from->end_tangent);
    CHECK(a0 < 1e-6);
    Point3 d1 = lane.bezier.derivative(1.0);
    double a1 = geom::angle_between(Point2{d1.x, d1.y}, to->start_tangent);
    CHECK(a1 < 1e-6);
    // all control points carry the flattened z exactly
    for (const auto& cp : lane.bezier.cp) CHECK(cp.z == z_int);
  }
}

TEST_CASE("I_Lane uniqueness and sign correctness") {
  Scene scene = make_scene(fixtures::make_y());
  LaneGraph graph = build_lane_graph(scene.net, scene.profiles, LaneParams{},
                                     ExecutionPolicy::serial);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& lane : graph.ilanes) {
    CHECK(seen.insert({lane.from_llane, lane.to_llane}).second);
    const LLane* from = graph.find_llane(lane.from_llane);
    const LLane* to = graph.find_llane(lane.to_llane);
    bool from_plus = false, to_minus = false;
    for (const auto& [x, sign] : from->relations) {
      if (x == lane.intersection_id && sign == '+') from_plus = true;
    }
    for (const auto& [x, sign] : to->relations) {
      if (x == lane.intersection_id && sign == '-') to_minus = true;
    }
    CHECK(from_plus);
    CHECK(to_minus);
  }
}

TEST_CASE("lane adjacency restricted to one intersection is weakly connected") {
  for (auto make : {+[]() { return fixtures::make_y(); }, +[]() { return fixtures::make_cross(); }}) {
    Scene scene = make_scene(make());
    LaneGraph graph = build_lane_graph(scene.net, scene.profiles, LaneParams{},
                                       ExecutionPolicy::serial);
    const auto& x = scene.net.intersections[0];
    std::set<std::string> nodes;
    std::map<std::string, std::vector<std::string>> undirected;
    for (const auto& lane : graph.ilanes) {
      if (lane.intersection_id != x.id) continue;
      nodes.insert(lane.from_llane);
      nodes.insert(lane.to_llane);
      undirected[lane.from_llane].push_back(lane.to_llane);
      undirected[lane.to_llane].push_back(lane.from_llane);
    }
    REQUIRE(!nodes.empty());
    std::set<std::string> reached;
    std::vector<std::string> stack{*nodes.begin()};
    while (!stack.empty()) {
      std::string v = stack.back();
      stack.pop_back();
      if (!reached.insert(v).second) continue;
      for (const auto& w : undirected[v]) stack.push_back(w);
    }
    CHECK(reached.size() == nodes.size());
  }
}

TEST_CASE("no I_Lanes at dead ends") {
  Scene scene = make_scene(fixtures::make_isolated(150.0));
  LaneGraph graph = build_lane_graph(scene.net, scene.profiles, LaneParams{},
                                     ExecutionPolicy::serial);
  CHECK(graph.ilanes.empty());
  CHECK(graph.connectors.empty());
}

TEST_CASE("lane endpoints lie on the intersection boundary") {
  Scene scene = make_scene(fixtures::make_cross());
  LaneGraph graph = build_lane_graph(scene.net, scene.profiles, LaneParams{},
                                     ExecutionPolicy::serial);
  const auto& x = scene.net.intersections[0];
  for (const auto& lane : graph.llanes) {
    for (const auto& [xid, sign] : lane.relations) {
      if (xid != x.id) continue;
      Point3 endpoint = sign == '+' ? lane.centerline.back() : lane.centerline.front();
      double best = 1e300;
      for (std::size_t i = 0; i < x.boundary.size(); ++i) {
        const Point2& a = x.boundary[i];
        const Point2& b = x.boundary[(i + 1) % x.boundary.size()];
        best = std::min(best, geom::point_segment_distance({endpoint.x, endpoint.y}, a, b));
      }
      CHECK(best < 1e-6);
    }
  }
}
