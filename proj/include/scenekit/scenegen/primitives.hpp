#pragma once

#include "scenekit/geometry/mesh.hpp"

#include <vector>

namespace scenekit {

// Parametric watertight solids, canonically upright with the base at z = 0.
// These back the bundled object catalog and the analytic test fixtures.

TriangleMesh make_box(const Vec3& size);  // corner at origin, extents = size

// Open-top rectangular shell with wall thickness `wall`; watertight.
TriangleMesh make_open_box(const Vec3& size, double wall);

// Surface of revolution around z. The profile is the material cross-section
// traced counterclockwise in the (r, z) half-plane and must start and end at
// r = 0; outward normals and watertightness follow from that contract.
TriangleMesh make_revolved(const std::vector<Eigen::Vector2d>& profile, int segments);

TriangleMesh make_sphere(double radius, int rings = 24, int segments = 48);
TriangleMesh make_cylinder(double radius, double height, int segments = 48);
// Truncated cone; r_top != r_bottom gives a pitcher-like silhouette.
TriangleMesh make_frustum(double r_bottom, double r_top, double height, int segments = 48);
// Open cylindrical vessel: outer radius, height, wall/bottom thickness.
TriangleMesh make_cup(double radius, double height, double wall, int segments = 48);
// Hemispherical shell with a flat rim; cavity opens upward.
TriangleMesh make_bowl(double radius, double wall, int arcs = 16, int segments = 48);

} // namespace scenekit
