#include "roadgen/pipeline/exports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "roadgen/errors.hpp"

namespace roadgen::pipeline {

namespace {

std::string fixed6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

void export_obj(const RoadMesh& mesh, const std::string& path, const OrthoRef* ortho) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot open output file", path);

  bool with_uv = ortho != nullptr;
  std::string mtl_path;
  if (with_uv && !ortho->image.empty()) {
    mtl_path = path.size() > 4 ? path.substr(0, path.size() - 4) + ".mtl" : path + ".mtl";
    std::ofstream mtl(mtl_path, std::ios::binary);
    if (!mtl) raise(errc::io_error, "cannot open output file", mtl_path);
    mtl << "newmtl ortho\n";
    mtl << "map_Kd " << ortho->image << "\n";
    std::size_t slash = mtl_path.find_last_of('/');
    out << "mtllib " << (slash == std::string::npos ? mtl_path : mtl_path.substr(slash + 1))
        << "\n";
  }

  int v_base = 1;
  int vt_base = 1;
  for (const auto& region : mesh.regions) {
    out << "o " << region.id << "\n";
    if (!mtl_path.empty()) out << "usemtl ortho\n";
    for (const auto& v : region.vertices) {
      out << "v " << fixed6(v.x) << " " << fixed6(v.y) << " " << fixed6(v.z) << "\n";
    }
    if (with_uv) {
      for (const auto& t : region.uv) out << "vt " << fixed6(t.x) << " " << fixed6(t.y) << "\n";
    }
    for (const auto& tri : region.triangles) {
      if (with_uv) {
        out << "f " << (v_base + tri[0]) << "/" << (vt_base + tri[0]) << " " << (v_base + tri[1])
            << "/" << (vt_base + tri[1]) << " " << (v_base + tri[2]) << "/" << (vt_base + tri[2])
            << "\n";
      } else {
        out << "f " << (v_base + tri[0]) << " " << (v_base + tri[1]) << " " << (v_base + tri[2])
            << "\n";
      }
    }
    v_base += static_cast<int>(region.vertices.size());
    vt_base += static_cast<int>(region.uv.size());
  }
  if (!out) raise(errc::io_error, "write failed", path);
}

void export_profile_csv(const profile::ProfileCurve& prof, double delta_s,
                        const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_error, "cannot open output file", path);
  out << "s,h,kappa,slope\n";
  double a = prof.curve.domain_start();
  double b = prof.curve.domain_end();
  double step = delta_s / 10.0;
  int n = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
  for (int k = 0; k <= n; ++k) {
    double s = a + (b - a) * k / n;
    out << fixed6(s) << "," << fixed6(prof.elevation_at(s)) << "," << fixed6(prof.curve.curvature(s))
        << "," << fixed6(prof.curve.slope(s)) << "\n";
  }
  if (!out) raise(errc::io_error, "write failed", path);
}

}  // namespace roadgen::pipeline
