#pragma once

#include "scenekit/geometry/mesh.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace scenekit {

struct ClosestPoint {
    Vec3 point{0.0, 0.0, 0.0};
    std::uint32_t face = 0;
    double distance = 0.0;
};

struct RayHit {
    double t = 0.0;
    std::uint32_t face = 0;
};

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

// Möller-Trumbore; returns the ray parameter t (in units of |dir|) or nothing.
std::optional<double> ray_triangle(const Vec3& origin, const Vec3& dir,
                                   const Vec3& a, const Vec3& b, const Vec3& c);

// Median-split AABB tree over face centroids. The mesh is referenced, not
// copied; it must outlive the tree. Queries are read-only and thread-safe.
class MeshBVH {
public:
    explicit MeshBVH(const TriangleMesh& mesh, int leaf_size = 8);

    const TriangleMesh& mesh() const { return *mesh_; }

    // Global minimizer of Euclidean distance over the whole surface.
    ClosestPoint closest_point(const Vec3& query) const;

    // Nearest intersection with t > 1e-9, t in units of |dir|.
    std::optional<RayHit> raycast(const Vec3& origin, const Vec3& dir) const;

    // Every intersection with t > 1e-9, sorted ascending by t.
    void raycast_all(const Vec3& origin, const Vec3& dir, std::vector<RayHit>& hits) const;

private:
    struct Node {
        Aabb box;
        std::int32_t left = -1;   // child index; leaf when left < 0
        std::int32_t right = -1;
        std::uint32_t first = 0;  // leaf: range into face_order_
        std::uint32_t count = 0;
    };

    std::int32_t build(std::uint32_t first, std::uint32_t count, const std::vector<Vec3>& centroids);

    const TriangleMesh* mesh_;
    int leaf_size_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> face_order_;
};

} // namespace scenekit
