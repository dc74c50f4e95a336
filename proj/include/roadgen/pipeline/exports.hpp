#pragma once

#include <string>

#include "roadgen/pipeline/mesh.hpp"
#include "roadgen/profile/profile.hpp"

namespace roadgen::pipeline {

// Wavefront OBJ with one `o` group per region, counterclockwise winding from
// +z and fixed 6-decimal formatting; deterministic for identical inputs.
// With an ortho reference, vt records are emitted and a sidecar MTL
// references the (undecoded) image.
void export_obj(const RoadMesh& mesh, const std::string& path, const OrthoRef* ortho = nullptr);

// Per-seg-axis CSV: s, h, kappa, slope at a tenth of the control spacing.
void export_profile_csv(const profile::ProfileCurve& prof, double delta_s,
                        const std::string& path);

}  // namespace roadgen::pipeline
