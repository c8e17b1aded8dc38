#pragma once

#include "scenekit/geometry/mesh.hpp"

#include <cstdint>
#include <vector>

namespace scenekit {

struct SurfaceSample {
    Vec3 point{0.0, 0.0, 0.0};
    Vec3 normal{0.0, 0.0, 1.0};  // face normal of the containing face
    std::uint32_t face = 0;
    double weight = 0.0;         // area weight in mm^2; sums to surface_area
};

// Area-uniform surface sampling: faces picked proportional to area,
// barycentric-uniform within a face. Deterministic for a fixed seed.
std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, std::size_t count,
                                          std::uint64_t seed);

// Sample points only; convenience for point-cloud consumers.
std::vector<Vec3> sample_points(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed);

} // namespace scenekit
