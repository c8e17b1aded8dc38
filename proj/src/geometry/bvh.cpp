#include "scenekit/geometry/bvh.hpp"

#include "scenekit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace scenekit {

namespace {
constexpr double kRayEps = 1e-9;
}

// Ericson, Real-Time Collision Detection, 5.1.5.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 ab = b - a, ac = c - a, ap = p - a;
    double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    Vec3 bp = p - b;
    double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + (d1 / (d1 - d3)) * ab;

    Vec3 cp = p - c;
    double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + (d2 / (d2 - d6)) * ac;

    double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0)
        return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);

    double denom = 1.0 / (va + vb + vc);
    return a + ab * (vb * denom) + ac * (vc * denom);
}

std::optional<double> ray_triangle(const Vec3& origin, const Vec3& dir,
                                   const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 e1 = b - a, e2 = c - a;
    Vec3 pvec = dir.cross(e2);
    double det = e1.dot(pvec);
    if (std::abs(det) < 1e-14) return std::nullopt;
    double inv = 1.0 / det;
    Vec3 tvec = origin - a;
    double u = tvec.dot(pvec) * inv;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    Vec3 qvec = tvec.cross(e1);
    double v = dir.dot(qvec) * inv;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    double t = e2.dot(qvec) * inv;
    if (t <= kRayEps) return std::nullopt;
    return t;
}

MeshBVH::MeshBVH(const TriangleMesh& mesh, int leaf_size)
    : mesh_(&mesh), leaf_size_(std::max(1, leaf_size)) {
    if (mesh.empty()) fail(ErrorCode::EmptyMesh, "cannot build BVH over empty mesh");
    const std::size_t nf = mesh.face_count();
    face_order_.resize(nf);
    std::vector<Vec3> centroids(nf);
    for (std::size_t i = 0; i < nf; ++i) {
        face_order_[i] = static_cast<std::uint32_t>(i);
        auto tri = mesh.triangle(i);
        centroids[i] = (tri[0] + tri[1] + tri[2]) / 3.0;
    }
    nodes_.reserve(2 * nf / static_cast<std::size_t>(leaf_size_) + 2);
    build(0, static_cast<std::uint32_t>(nf), centroids);
}

std::int32_t MeshBVH::build(std::uint32_t first, std::uint32_t count,
                            const std::vector<Vec3>& centroids) {
    Node node;
    node.box = Aabb::empty();
    for (std::uint32_t i = first; i < first + count; ++i) {
        auto tri = mesh_->triangle(face_order_[i]);
        node.box.expand(tri[0]);
        node.box.expand(tri[1]);
        node.box.expand(tri[2]);
    }
    std::int32_t index = static_cast<std::int32_t>(nodes_.size());
    nodes_.push_back(node);

    if (count <= static_cast<std::uint32_t>(leaf_size_)) {
        nodes_[index].first = first;
        nodes_[index].count = count;
        return index;
    }

    Vec3 ext = node.box.extent();
    int axis = 0;
    if (ext.y() > ext.x()) axis = 1;
    if (ext.z() > ext[axis]) axis = 2;

    std::uint32_t mid = first + count / 2;
    std::nth_element(face_order_.begin() + first, face_order_.begin() + mid,
                     face_order_.begin() + first + count,
                     [&](std::uint32_t fa, std::uint32_t fb) {
                         double ca = centroids[fa][axis], cb = centroids[fb][axis];
                         if (ca != cb) return ca < cb;
                         return fa < fb; // stable tie-break keeps builds deterministic
                     });

    std::int32_t left = build(first, mid - first, centroids);
    std::int32_t right = build(mid, first + count - mid, centroids);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
}

ClosestPoint MeshBVH::closest_point(const Vec3& query) const {
    ClosestPoint best;
    best.distance = std::numeric_limits<double>::infinity();
    double best_sq = std::numeric_limits<double>::infinity();

    std::int32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (node.box.sq_distance(query) >= best_sq) continue;
        if (node.left < 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                std::uint32_t face = face_order_[i];
                auto tri = mesh_->triangle(face);
                Vec3 cp = closest_point_on_triangle(query, tri[0], tri[1], tri[2]);
                double sq = (cp - query).squaredNorm();
                if (sq < best_sq) {
                    best_sq = sq;
                    best.point = cp;
                    best.face = face;
                }
            }
        } else {
            double dl = nodes_[node.left].box.sq_distance(query);
            double dr = nodes_[node.right].box.sq_distance(query);
            // Push the farther child first so the nearer one is visited next.
            if (dl <= dr) {
                if (dr < best_sq) stack[top++] = node.right;
                if (dl < best_sq) stack[top++] = node.left;
            } else {
                if (dl < best_sq) stack[top++] = node.left;
                if (dr < best_sq) stack[top++] = node.right;
            }
        }
    }
    best.distance = std::sqrt(best_sq);
    return best;
}

namespace {

// Slab test against [t_min, t_max]; dir components may be zero.
bool ray_box(const Vec3& origin, const Vec3& inv_dir, const Aabb& box, double t_min, double t_max) {
    for (int a = 0; a < 3; ++a) {
        if (std::isinf(inv_dir[a])) {
            if (origin[a] < box.min[a] || origin[a] > box.max[a]) return false;
            continue;
        }
        double t0 = (box.min[a] - origin[a]) * inv_dir[a];
        double t1 = (box.max[a] - origin[a]) * inv_dir[a];
        if (t0 > t1) std::swap(t0, t1);
        t_min = std::max(t_min, t0);
        t_max = std::min(t_max, t1);
        if (t_min > t_max) return false;
    }
    return true;
}

} // namespace

std::optional<RayHit> MeshBVH::raycast(const Vec3& origin, const Vec3& dir) const {
    if (dir.squaredNorm() == 0.0) fail(ErrorCode::DegenerateInput, "raycast with zero direction");
    Vec3 inv_dir = dir.cwiseInverse();
    double best_t = std::numeric_limits<double>::infinity();
    std::uint32_t best_face = 0;

    std::int32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!ray_box(origin, inv_dir, node.box, kRayEps, best_t)) continue;
        if (node.left < 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                std::uint32_t face = face_order_[i];
                auto tri = mesh_->triangle(face);
                auto t = ray_triangle(origin, dir, tri[0], tri[1], tri[2]);
                if (t && *t < best_t) {
                    best_t = *t;
                    best_face = face;
                }
            }
        } else {
            stack[top++] = node.right;
            stack[top++] = node.left;
        }
    }
    if (!std::isfinite(best_t)) return std::nullopt;
    return RayHit{best_t, best_face};
}

void MeshBVH::raycast_all(const Vec3& origin, const Vec3& dir, std::vector<RayHit>& hits) const {
    if (dir.squaredNorm() == 0.0) fail(ErrorCode::DegenerateInput, "raycast with zero direction");
    hits.clear();
    Vec3 inv_dir = dir.cwiseInverse();
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::int32_t stack[128];
    int top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!ray_box(origin, inv_dir, node.box, kRayEps, inf)) continue;
        if (node.left < 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                std::uint32_t face = face_order_[i];
                auto tri = mesh_->triangle(face);
                auto t = ray_triangle(origin, dir, tri[0], tri[1], tri[2]);
                if (t) hits.push_back({*t, face});
            }
        } else {
            stack[top++] = node.right;
            stack[top++] = node.left;
        }
    }
    std::sort(hits.begin(), hits.end(), [](const RayHit& a, const RayHit& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.face < b.face;
    });
}

} // namespace scenekit
