#include "roadgen/terrain/segment.hpp"

#include <algorithm>

#include "roadgen/geom/polygon.hpp"

namespace roadgen::terrain {

namespace {

struct Region {
  RegionRef ref;
  const std::vector<geom::Point2>* polygon;
  geom::Box2 bbox;
};

}  // namespace

RoadMask segment_elevation(const HeightField& hf, const net::RoadNetwork2D& net,
                           ExecutionPolicy policy, std::vector<net::Warning>* warnings) {
  RoadMask mask(hf.ncols(), hf.nrows());

  // Region order defines precedence: intersections first, then links, both
  // by ascending id; the first match wins.
  std::vector<Region> regions;
  std::vector<const net::Intersection*> xs;
  for (const auto& x : net.intersections) xs.push_back(&x);
  std::sort(xs.begin(), xs.end(),
            [](const net::Intersection* a, const net::Intersection* b) { return a->id < b->id; });
  std::vector<const net::Link*> ls;
  for (const auto& l : net.links) ls.push_back(&l);
  std::sort(ls.begin(), ls.end(),
            [](const net::Link* a, const net::Link* b) { return a->id < b->id; });

  geom::Box2 raster = hf.domain();
  auto add_region = [&](RegionRef ref, const std::vector<geom::Point2>* polygon) {
    geom::Box2 bbox;
    for (const auto& p : *polygon) bbox.expand(p);
    if (warnings && (bbox.lo.x < raster.lo.x || bbox.lo.y < raster.lo.y ||
                     bbox.hi.x > raster.hi.x || bbox.hi.y > raster.hi.y)) {
      warnings->push_back({ref.id, "region extends outside the raster; clipped"});
    }
    regions.push_back({std::move(ref), polygon, bbox});
  };
  for (const auto* x : xs) {
    add_region({RegionRef::Kind::intersection, x->id}, &x->boundary);
  }
  for (const auto* l : ls) add_region({RegionRef::Kind::link, l->id}, &l->polygon);

  for (const auto& r : regions) mask.regions().push_back(r.ref);

  // Bucket grid over the raster for candidate lookup.
  int bx = std::max(1, hf.ncols() / 16);
  int by = std::max(1, hf.nrows() / 16);
  double bucket_w = hf.ncols() * hf.cellsize() / bx;
  double bucket_h = hf.nrows() * hf.cellsize() / by;
  std::vector<std::vector<int>> buckets(static_cast<std::size_t>(bx) * by);
  auto bucket_range = [&](const geom::Box2& box, int& c0, int& c1, int& r0, int& r1) {
    c0 = std::clamp(static_cast<int>((box.lo.x - raster.lo.x) / bucket_w), 0, bx - 1);
    c1 = std::clamp(static_cast<int>((box.hi.x - raster.lo.x) / bucket_w), 0, bx - 1);
    r0 = std::clamp(static_cast<int>((box.lo.y - raster.lo.y) / bucket_h), 0, by - 1);
    r1 = std::clamp(static_cast<int>((box.hi.y - raster.lo.y) / bucket_h), 0, by - 1);
  };
  for (std::size_t i = 0; i < regions.size(); ++i) {
    int c0, c1, r0, r1;
    bucket_range(regions[i].bbox, c0, c1, r0, r1);
    for (int r = r0; r <= r1; ++r) {
      for (int c = c0; c <= c1; ++c) {
        buckets[static_cast<std::size_t>(r) * bx + c].push_back(static_cast<int>(i));
      }
    }
  }

  parallel_for(static_cast<std::size_t>(hf.nrows()), policy, [&](std::size_t row) {
    for (int col = 0; col < hf.ncols(); ++col) {
      geom::Point2 center = hf.cell_center(col, static_cast<int>(row));
      int bc = std::clamp(static_cast<int>((center.x - raster.lo.x) / bucket_w), 0, bx - 1);
      int br = std::clamp(static_cast<int>((center.y - raster.lo.y) / bucket_h), 0, by - 1);
      for (int ri : buckets[static_cast<std::size_t>(br) * bx + bc]) {
        const Region& region = regions[static_cast<std::size_t>(ri)];
        if (!region.bbox.contains(center)) continue;
        if (geom::point_in_polygon(center, *region.polygon)) {
          mask.set(col, static_cast<int>(row), ri);
          break;
        }
      }
    }
  });

  return mask;
}

}  // namespace roadgen::terrain
