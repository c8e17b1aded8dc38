#pragma once

#include "scenekit/pose/transform.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace scenekit {

struct Aabb {
    Vec3 min{0.0, 0.0, 0.0};
    Vec3 max{0.0, 0.0, 0.0};

    Vec3 extent() const { return max - min; }
    Vec3 center() const { return 0.5 * (min + max); }
    double diagonal() const { return extent().norm(); }

    void expand(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    void expand(const Aabb& b) {
        min = min.cwiseMin(b.min);
        max = max.cwiseMax(b.max);
    }
    // Squared distance from a point to the box (0 inside).
    double sq_distance(const Vec3& p) const {
        Vec3 d = (min - p).cwiseMax(p - max).cwiseMax(0.0);
        return d.squaredNorm();
    }
    static Aabb empty() {
        constexpr double inf = 1e300;
        return {{inf, inf, inf}, {-inf, -inf, -inf}};
    }
};

// Indexed triangle surface in millimeters. Normals and areas are derived at
// construction; faces with area <= 1e-12 mm^2 are rejected.
class TriangleMesh {
public:
    TriangleMesh() = default;
    TriangleMesh(std::vector<Vec3> vertices, std::vector<std::array<std::uint32_t, 3>> faces);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::array<std::uint32_t, 3>>& faces() const { return faces_; }
    const std::vector<Vec3>& face_normals() const { return face_normals_; }
    const std::vector<Vec3>& vertex_normals() const { return vertex_normals_; }
    const std::vector<double>& face_areas() const { return face_areas_; }

    std::size_t vertex_count() const { return vertices_.size(); }
    std::size_t face_count() const { return faces_.size(); }
    bool empty() const { return faces_.empty(); }

    std::array<Vec3, 3> triangle(std::size_t face) const {
        const auto& f = faces_[face];
        return {vertices_[f[0]], vertices_[f[1]], vertices_[f[2]]};
    }

    double surface_area() const { return total_area_; }
    const Aabb& bounds() const { return bounds_; }
    double diameter() const { return bounds_.diagonal(); }
    Vec3 centroid() const;  // area-weighted surface centroid

    // Signed volume via the divergence theorem; meaningful for closed meshes.
    double signed_volume() const;

    TriangleMesh transformed(const RigidTransform& T) const;
    TriangleMesh transformed(const Sim3Transform& T) const;

private:
    void finalize();

    std::vector<Vec3> vertices_;
    std::vector<std::array<std::uint32_t, 3>> faces_;
    std::vector<Vec3> face_normals_;
    std::vector<Vec3> vertex_normals_;
    std::vector<double> face_areas_;
    double total_area_ = 0.0;
    Aabb bounds_ = Aabb::empty();
};

// OBJ (geometry only) or PLY (ascii / binary little-endian). Colors and
// textures are ignored. Vertex order is preserved.
TriangleMesh load_mesh(const std::string& path);
void save_obj(const TriangleMesh& mesh, const std::string& path);

} // namespace scenekit
