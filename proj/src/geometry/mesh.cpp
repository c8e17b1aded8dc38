#include "scenekit/geometry/mesh.hpp"

#include "scenekit/errors.hpp"

#include <cmath>
#include <utility>

namespace scenekit {

TriangleMesh::TriangleMesh(std::vector<Vec3> vertices,
                           std::vector<std::array<std::uint32_t, 3>> faces)
    : vertices_(std::move(vertices)), faces_(std::move(faces)) {
    finalize();
}

void TriangleMesh::finalize() {
    const std::size_t nv = vertices_.size();
    face_normals_.resize(faces_.size());
    face_areas_.resize(faces_.size());
    vertex_normals_.assign(nv, Vec3::Zero());
    total_area_ = 0.0;
    bounds_ = Aabb::empty();

    for (const Vec3& v : vertices_) bounds_.expand(v);

    for (std::size_t i = 0; i < faces_.size(); ++i) {
        const auto& f = faces_[i];
        if (f[0] >= nv || f[1] >= nv || f[2] >= nv)
            fail(ErrorCode::Parse, "face " + std::to_string(i) + " references vertex out of range");
        Vec3 a = vertices_[f[0]], b = vertices_[f[1]], c = vertices_[f[2]];
        Vec3 n = (b - a).cross(c - a);
        double len = n.norm();
        double area = 0.5 * len;
        if (area <= 1e-12)
            fail(ErrorCode::DegenerateMesh, "face " + std::to_string(i) + " is degenerate (area <= 1e-12 mm^2)");
        face_normals_[i] = n / len;
        face_areas_[i] = area;
        total_area_ += area;
        // Area-weighted vertex normals.
        vertex_normals_[f[0]] += area * face_normals_[i];
        vertex_normals_[f[1]] += area * face_normals_[i];
        vertex_normals_[f[2]] += area * face_normals_[i];
    }
    for (Vec3& n : vertex_normals_) {
        double len = n.norm();
        if (len > 1e-20) n /= len;
    }
}

Vec3 TriangleMesh::centroid() const {
    Vec3 c = Vec3::Zero();
    for (std::size_t i = 0; i < faces_.size(); ++i) {
        const auto& f = faces_[i];
        c += face_areas_[i] / 3.0 * (vertices_[f[0]] + vertices_[f[1]] + vertices_[f[2]]);
    }
    return total_area_ > 0.0 ? Vec3(c / total_area_) : Vec3::Zero();
}

double TriangleMesh::signed_volume() const {
    double v = 0.0;
    for (const auto& f : faces_) {
        const Vec3& a = vertices_[f[0]];
        const Vec3& b = vertices_[f[1]];
        const Vec3& c = vertices_[f[2]];
        v += a.dot(b.cross(c));
    }
    return v / 6.0;
}

TriangleMesh TriangleMesh::transformed(const RigidTransform& T) const {
    std::vector<Vec3> verts(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) verts[i] = T.apply(vertices_[i]);
    return TriangleMesh(std::move(verts), faces_);
}

TriangleMesh TriangleMesh::transformed(const Sim3Transform& T) const {
    std::vector<Vec3> verts(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i) verts[i] = T.apply(vertices_[i]);
    return TriangleMesh(std::move(verts), faces_);
}

} // namespace scenekit
