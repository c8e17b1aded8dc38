#include "scenekit/scenegen/primitives.hpp"

#include "scenekit/errors.hpp"

#include <cmath>

namespace scenekit {

namespace {

constexpr double kTau = 6.283185307179586476925286766559;

void push_quad(std::vector<std::array<std::uint32_t, 3>>& faces,
               std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
    faces.push_back({a, b, c});
    faces.push_back({a, c, d});
}

} // namespace

TriangleMesh make_box(const Vec3& size) {
    std::vector<Vec3> v = {
        {0, 0, 0}, {size.x(), 0, 0}, {size.x(), size.y(), 0}, {0, size.y(), 0},
        {0, 0, size.z()}, {size.x(), 0, size.z()}, {size.x(), size.y(), size.z()}, {0, size.y(), size.z()},
    };
    std::vector<std::array<std::uint32_t, 3>> f;
    push_quad(f, 0, 3, 2, 1);  // bottom, normal -z
    push_quad(f, 4, 5, 6, 7);  // top, normal +z
    push_quad(f, 0, 1, 5, 4);  // y = 0
    push_quad(f, 2, 3, 7, 6);  // y = sy
    push_quad(f, 1, 2, 6, 5);  // x = sx
    push_quad(f, 3, 0, 4, 7);  // x = 0
    return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh make_open_box(const Vec3& size, double wall) {
    const double sx = size.x(), sy = size.y(), sz = size.z(), w = wall;
    if (w <= 0.0 || 2.0 * w >= sx || 2.0 * w >= sy || w >= sz)
        fail(ErrorCode::DegenerateInput, "open box wall thickness incompatible with size");

    // Outer ring 0..3 (z=0), 4..7 (z=sz); inner ring 8..11 (z=sz), 12..15 (z=w cavity floor).
    std::vector<Vec3> v = {
        {0, 0, 0}, {sx, 0, 0}, {sx, sy, 0}, {0, sy, 0},
        {0, 0, sz}, {sx, 0, sz}, {sx, sy, sz}, {0, sy, sz},
        {w, w, sz}, {sx - w, w, sz}, {sx - w, sy - w, sz}, {w, sy - w, sz},
        {w, w, w}, {sx - w, w, w}, {sx - w, sy - w, w}, {w, sy - w, w},
    };
    std::vector<std::array<std::uint32_t, 3>> f;
    push_quad(f, 0, 3, 2, 1);   // outer bottom
    push_quad(f, 0, 1, 5, 4);   // outer walls
    push_quad(f, 1, 2, 6, 5);
    push_quad(f, 2, 3, 7, 6);
    push_quad(f, 3, 0, 4, 7);
    push_quad(f, 4, 5, 9, 8);   // rim ring (upward)
    push_quad(f, 5, 6, 10, 9);
    push_quad(f, 6, 7, 11, 10);
    push_quad(f, 7, 4, 8, 11);
    push_quad(f, 8, 9, 13, 12); // inner walls (normals into cavity)
    push_quad(f, 9, 10, 14, 13);
    push_quad(f, 10, 11, 15, 14);
    push_quad(f, 11, 8, 12, 15);
    push_quad(f, 12, 13, 14, 15); // cavity floor (upward)
    return TriangleMesh(std::move(v), std::move(f));
}

TriangleMesh make_revolved(const std::vector<Eigen::Vector2d>& profile, int segments) {
    if (profile.size() < 3 || segments < 3)
        fail(ErrorCode::DegenerateInput, "revolve needs >= 3 profile points and segments");
    if (std::abs(profile.front().x()) > 1e-12 || std::abs(profile.back().x()) > 1e-12)
        fail(ErrorCode::DegenerateInput, "revolve profile must start and end on the axis");

    const std::size_t m = profile.size();
    std::vector<Vec3> verts;
    std::vector<std::array<std::uint32_t, 3>> faces;

    // Pole vertices for the axis endpoints, a ring of `segments` for the rest.
    std::vector<std::uint32_t> ring_start(m, 0);
    verts.push_back({0.0, 0.0, profile.front().y()});
    for (std::size_t i = 1; i + 1 < m; ++i) {
        ring_start[i] = static_cast<std::uint32_t>(verts.size());
        for (int j = 0; j < segments; ++j) {
            double phi = kTau * j / segments;
            verts.push_back({profile[i].x() * std::cos(phi), profile[i].x() * std::sin(phi),
                             profile[i].y()});
        }
    }
    std::uint32_t top_pole = static_cast<std::uint32_t>(verts.size());
    verts.push_back({0.0, 0.0, profile.back().y()});

    auto ring = [&](std::size_t i, int j) {
        return ring_start[i] + static_cast<std::uint32_t>(j % segments);
    };

    // Bottom fan. A CCW material profile revolved about +z winds so that
    // (ring j+1, ring j) seen from below faces outward.
    for (int j = 0; j < segments; ++j)
        faces.push_back({0, ring(1, j + 1), ring(1, j)});
    // Side quads.
    for (std::size_t i = 1; i + 2 < m; ++i)
        for (int j = 0; j < segments; ++j)
            push_quad(faces, ring(i, j), ring(i, j + 1), ring(i + 1, j + 1), ring(i + 1, j));
    // Top fan.
    for (int j = 0; j < segments; ++j)
        faces.push_back({top_pole, ring(m - 2, j), ring(m - 2, j + 1)});

    return TriangleMesh(std::move(verts), std::move(faces));
}

TriangleMesh make_sphere(double radius, int rings, int segments) {
    std::vector<Eigen::Vector2d> profile;
    for (int i = 0; i <= rings; ++i) {
        double theta = M_PI * i / rings;
        profile.push_back({radius * std::sin(theta), radius * (1.0 - std::cos(theta))});
    }
    return make_revolved(profile, segments);
}

TriangleMesh make_cylinder(double radius, double height, int segments) {
    return make_revolved({{0.0, 0.0}, {radius, 0.0}, {radius, height}, {0.0, height}}, segments);
}

TriangleMesh make_frustum(double r_bottom, double r_top, double height, int segments) {
    return make_revolved({{0.0, 0.0}, {r_bottom, 0.0}, {r_top, height}, {0.0, height}}, segments);
}

TriangleMesh make_cup(double radius, double height, double wall, int segments) {
    if (wall <= 0.0 || wall >= radius || wall >= height)
        fail(ErrorCode::DegenerateInput, "cup wall thickness incompatible with size");
    return make_revolved({{0.0, 0.0},
                          {radius, 0.0},
                          {radius, height},
                          {radius - wall, height},
                          {radius - wall, wall},
                          {0.0, wall}},
                         segments);
}

TriangleMesh make_bowl(double radius, double wall, int arcs, int segments) {
    if (wall <= 0.0 || wall >= radius)
        fail(ErrorCode::DegenerateInput, "bowl wall thickness incompatible with size");
    std::vector<Eigen::Vector2d> profile;
    // Outer dome from the bottom pole up to the rim; sphere center at z = radius.
    for (int i = 0; i <= arcs; ++i) {
        double theta = 0.5 * M_PI * i / arcs;
        profile.push_back({radius * std::sin(theta), radius * (1.0 - std::cos(theta))});
    }
    // Inner surface back down to the cavity floor pole at z = wall.
    double inner = radius - wall;
    for (int i = arcs; i >= 0; --i) {
        double theta = 0.5 * M_PI * i / arcs;
        profile.push_back({inner * std::sin(theta), radius - inner * std::cos(theta)});
    }
    return make_revolved(profile, segments);
}

} // namespace scenekit
