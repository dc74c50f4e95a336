#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roadgen/net/types.hpp"
#include "roadgen/parallel.hpp"
#include "roadgen/terrain/heightfield.hpp"

namespace roadgen::terrain {

struct RegionRef {
  enum class Kind { link, intersection };
  Kind kind = Kind::link;
  std::string id;
};

// Per-cell classification of the raster into road regions and complement.
class RoadMask {
public:
  RoadMask() = default;
  RoadMask(int ncols, int nrows) : ncols_(ncols), nrows_(nrows) {
    cells_.assign(static_cast<std::size_t>(ncols) * static_cast<std::size_t>(nrows), -1);
  }

  int ncols() const { return ncols_; }
  int nrows() const { return nrows_; }
  int32_t region_index(int col, int row) const {
    return cells_[static_cast<std::size_t>(row) * static_cast<std::size_t>(ncols_) +
                  static_cast<std::size_t>(col)];
  }
  void set(int col, int row, int32_t region) {
    cells_[static_cast<std::size_t>(row) * static_cast<std::size_t>(ncols_) +
           static_cast<std::size_t>(col)] = region;
  }
  bool is_road(int col, int row) const { return region_index(col, row) >= 0; }

  const std::vector<RegionRef>& regions() const { return regions_; }
  std::vector<RegionRef>& regions() { return regions_; }

  std::size_t road_cell_count() const {
    std::size_t n = 0;
    for (int32_t c : cells_) n += c >= 0 ? 1 : 0;
    return n;
  }
  std::size_t cell_count() const { return cells_.size(); }
  const std::vector<int32_t>& raw() const { return cells_; }

private:
  int ncols_ = 0;
  int nrows_ = 0;
  std::vector<int32_t> cells_;
  std::vector<RegionRef> regions_;
};

// Classifies every cell center against the network polygons. Intersections
// take precedence over links; within a class the lower id wins. Regions
// outside the raster are clipped with a warning.
RoadMask segment_elevation(const HeightField& hf, const net::RoadNetwork2D& net,
                           ExecutionPolicy policy = ExecutionPolicy::parallel,
                           std::vector<net::Warning>* warnings = nullptr);

}  // namespace roadgen::terrain
