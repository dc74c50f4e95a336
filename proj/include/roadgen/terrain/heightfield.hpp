#pragma once

#include <array>
#include <string>
#include <vector>

#include "roadgen/geom/types.hpp"

namespace roadgen::terrain {

// Georeferenced elevation raster. Grid rows are stored south-to-north
// (row 0 = southernmost), origin is the lower-left corner of the raster.
class HeightField {
public:
  HeightField() = default;
  HeightField(int ncols, int nrows, double cellsize, geom::Point2 origin,
              std::vector<double> values);

  static HeightField load(const std::string& path);
  static HeightField load_asc(const std::string& path);
  // Binary PGM (P5) plus a `<stem>.geo.json` sidecar:
  //   { "origin": [x, y], "cellsize": c, "scale": s, "offset": o }
  // with elevation = pixel * s + o.
  static HeightField load_pgm(const std::string& path);

  int ncols() const { return ncols_; }
  int nrows() const { return nrows_; }
  double cellsize() const { return cellsize_; }
  const geom::Point2& origin() const { return origin_; }

  double value(int col, int row) const { return z_[index(col, row)]; }
  geom::Point2 cell_center(int col, int row) const {
    return {origin_.x + (col + 0.5) * cellsize_, origin_.y + (row + 0.5) * cellsize_};
  }

  // Bilinear interpolation of the four surrounding cell centers; constant
  // continuation within the outer half-cell ring. Throws OutOfBounds outside
  // the raster rectangle.
  double sample(double x, double y) const;

  geom::Box2 domain() const {
    geom::Box2 b;
    b.expand(origin_);
    b.expand({origin_.x + ncols_ * cellsize_, origin_.y + nrows_ * cellsize_});
    return b;
  }
  std::array<geom::Point2, 4> corners() const {
    geom::Box2 b = domain();
    return {geom::Point2{b.lo.x, b.lo.y}, {b.hi.x, b.lo.y}, {b.hi.x, b.hi.y}, {b.lo.x, b.hi.y}};
  }

  double min_value() const;
  double max_value() const;

private:
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(ncols_) +
           static_cast<std::size_t>(col);
  }

  int ncols_ = 0;
  int nrows_ = 0;
  double cellsize_ = 1.0;
  geom::Point2 origin_;
  std::vector<double> z_;
};

}  // namespace roadgen::terrain
