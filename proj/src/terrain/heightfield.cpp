#include "roadgen/terrain/heightfield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "roadgen/errors.hpp"

namespace roadgen::terrain {

HeightField::HeightField(int ncols, int nrows, double cellsize, geom::Point2 origin,
                         std::vector<double> values)
    : ncols_(ncols), nrows_(nrows), cellsize_(cellsize), origin_(origin), z_(std::move(values)) {
  if (ncols_ <= 0 || nrows_ <= 0) raise(errc::format_error, "raster dimensions must be positive");
  if (cellsize_ <= 0.0) raise(errc::format_error, "cell size must be positive");
  if (z_.size() != static_cast<std::size_t>(ncols_) * static_cast<std::size_t>(nrows_)) {
    raise(errc::format_error, "value count does not match raster dimensions");
  }
  for (double v : z_) {
    if (!std::isfinite(v)) raise(errc::format_error, "non-finite elevation value");
  }
}

double HeightField::sample(double x, double y) const {
  geom::Box2 box = domain();
  if (x < box.lo.x || x > box.hi.x || y < box.lo.y || y > box.hi.y) {
    raise(errc::out_of_bounds, "sample outside the raster");
  }
  // position in cell-center space
  double gx = (x - origin_.x) / cellsize_ - 0.5;
  double gy = (y - origin_.y) / cellsize_ - 0.5;
  double cx = std::clamp(gx, 0.0, static_cast<double>(ncols_ - 1));
  double cy = std::clamp(gy, 0.0, static_cast<double>(nrows_ - 1));
  int c0 = std::min(static_cast<int>(cx), ncols_ - 2 >= 0 ? ncols_ - 2 : 0);
  int r0 = std::min(static_cast<int>(cy), nrows_ - 2 >= 0 ? nrows_ - 2 : 0);
  int c1 = std::min(c0 + 1, ncols_ - 1);
  int r1 = std::min(r0 + 1, nrows_ - 1);
  double fx = std::clamp(cx - c0, 0.0, 1.0);
  double fy = std::clamp(cy - r0, 0.0, 1.0);
  double v00 = value(c0, r0), v10 = value(c1, r0), v01 = value(c0, r1), v11 = value(c1, r1);
  return v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) + v01 * (1 - fx) * fy + v11 * fx * fy;
}

double HeightField::min_value() const { return *std::min_element(z_.begin(), z_.end()); }
double HeightField::max_value() const { return *std::max_element(z_.begin(), z_.end()); }

namespace {

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Nearest-neighbor infill for NODATA cells, by ring dilation.
void infill_nodata(std::vector<double>& z, std::vector<bool>& missing, int ncols, int nrows) {
  bool any = false;
  for (bool m : missing) any = any || m;
  if (!any) return;
  auto idx = [&](int c, int r) {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(ncols) +
           static_cast<std::size_t>(c);
  };
  for (int pass = 0; pass < ncols + nrows && any; ++pass) {
    any = false;
    std::vector<bool> next = missing;
    for (int r = 0; r < nrows; ++r) {
      for (int c = 0; c < ncols; ++c) {
        if (!missing[idx(c, r)]) continue;
        double sum = 0.0;
        int n = 0;
        const int dc[4] = {1, -1, 0, 0};
        const int dr[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          int cc = c + dc[k], rr = r + dr[k];
          if (cc < 0 || cc >= ncols || rr < 0 || rr >= nrows) continue;
          if (missing[idx(cc, rr)]) continue;
          sum += z[idx(cc, rr)];
          ++n;
        }
        if (n > 0) {
          z[idx(c, r)] = sum / n;
          next[idx(c, r)] = false;
        } else {
          any = true;
        }
      }
    }
    missing.swap(next);
  }
  for (std::size_t i = 0; i < missing.size(); ++i) {
    if (missing[i]) z[i] = 0.0;
  }
}

}  // namespace

HeightField HeightField::load(const std::string& path) {
  std::string ext = lower(path.size() >= 4 ? path.substr(path.size() - 4) : "");
  if (ext == ".asc") return load_asc(path);
  if (ext == ".pgm") return load_pgm(path);
  raise(errc::format_error, "unsupported heightfield format (use .asc or .pgm)", path);
}

HeightField HeightField::load_asc(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open raster", path);

  int ncols = -1, nrows = -1;
  double xll = 0.0, yll = 0.0, cellsize = 0.0, nodata = -9999.0;
  bool has_nodata = false;
  std::string key;
  // header: ncols nrows xllcorner yllcorner cellsize [NODATA_value]
  for (;;) {
    std::streampos mark = in.tellg();
    if (!(in >> key)) raise(errc::format_error, "truncated header", path);
    std::string k = lower(key);
    if (k == "ncols") {
      in >> ncols;
    } else if (k == "nrows") {
      in >> nrows;
    } else if (k == "xllcorner") {
      in >> xll;
    } else if (k == "yllcorner") {
      in >> yll;
    } else if (k == "cellsize") {
      in >> cellsize;
    } else if (k == "nodata_value") {
      in >> nodata;
      has_nodata = true;
    } else {
      in.seekg(mark);
      break;
    }
    if (!in) raise(errc::format_error, "malformed header value", path);
  }
  if (ncols <= 0 || nrows <= 0 || cellsize <= 0.0) {
    raise(errc::format_error, "header must define ncols, nrows and cellsize", path);
  }

  std::vector<double> z(static_cast<std::size_t>(ncols) * static_cast<std::size_t>(nrows), 0.0);
  std::vector<bool> missing(z.size(), false);
  // file rows run north to south; storage is south-up
  for (int r = nrows - 1; r >= 0; --r) {
    for (int c = 0; c < ncols; ++c) {
      double v;
      if (!(in >> v)) raise(errc::format_error, "truncated value grid", path);
      std::size_t i = static_cast<std::size_t>(r) * static_cast<std::size_t>(ncols) +
                      static_cast<std::size_t>(c);
      if (has_nodata && v == nodata) {
        missing[i] = true;
        z[i] = 0.0;
      } else {
        z[i] = v;
      }
    }
  }
  infill_nodata(z, missing, ncols, nrows);
  return HeightField(ncols, nrows, cellsize, {xll, yll}, std::move(z));
}

HeightField HeightField::load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_error, "cannot open raster", path);

  std::string magic;
  in >> magic;
  if (magic != "P5") raise(errc::format_error, "only binary PGM (P5) is supported", path);
  auto next_int = [&]() {
    // skips whitespace and '#' comments
    for (;;) {
      int ch = in.peek();
      if (ch == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(ch)) {
        in.get();
      } else {
        break;
      }
    }
    long v = -1;
    in >> v;
    return v;
  };
  long ncols = next_int();
  long nrows = next_int();
  long maxval = next_int();
  if (ncols <= 0 || nrows <= 0 || maxval <= 0 || maxval > 65535) {
    raise(errc::format_error, "malformed PGM header", path);
  }
  in.get();  // single whitespace before binary data

  // sidecar with the georeference
  std::string stem = path.substr(0, path.size() - 4);
  std::ifstream side(stem + ".geo.json");
  if (!side) raise(errc::missing_georeference, "missing sidecar " + stem + ".geo.json", path);
  nlohmann::json geo;
  try {
    side >> geo;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::missing_georeference, std::string("bad sidecar: ") + e.what(), path);
  }
  if (!geo.contains("origin") || !geo.contains("cellsize")) {
    raise(errc::missing_georeference, "sidecar needs origin and cellsize", path);
  }
  geom::Point2 origin{geo["origin"][0].get<double>(), geo["origin"][1].get<double>()};
  double cellsize = geo["cellsize"].get<double>();
  double scale = geo.value("scale", 1.0);
  double offset = geo.value("offset", 0.0);

  std::size_t count = static_cast<std::size_t>(ncols) * static_cast<std::size_t>(nrows);
  std::vector<double> z(count, 0.0);
  bool wide = maxval > 255;
  std::vector<unsigned char> buf(count * (wide ? 2 : 1));
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
    raise(errc::format_error, "truncated PGM pixel data", path);
  }
  // PGM rows run top (north) to bottom; storage is south-up
  for (long r = 0; r < nrows; ++r) {
    for (long c = 0; c < ncols; ++c) {
      std::size_t src = static_cast<std::size_t>(r) * static_cast<std::size_t>(ncols) +
                        static_cast<std::size_t>(c);
      unsigned pixel = wide ? (static_cast<unsigned>(buf[src * 2]) << 8) | buf[src * 2 + 1]
                            : buf[src];
      std::size_t dst = static_cast<std::size_t>(nrows - 1 - r) * static_cast<std::size_t>(ncols) +
                        static_cast<std::size_t>(c);
      z[dst] = pixel * scale + offset;
    }
  }
  return HeightField(static_cast<int>(ncols), static_cast<int>(nrows), cellsize, origin,
                     std::move(z));
}

}  // namespace roadgen::terrain
