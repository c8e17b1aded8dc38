#pragma once

#include "scenekit/geometry/mesh.hpp"
#include "scenekit/pose/transform.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace scenekit {

// Pinhole camera. `pose` maps camera coordinates to world coordinates; the
// camera looks along its +z axis, x right, y down.
struct Camera {
    double fx = 0.0, fy = 0.0;  // focal lengths, pixels
    double cx = 0.0, cy = 0.0;  // principal point, pixels
    int width = 0, height = 0;
    RigidTransform pose;        // camera-to-world

    bool valid() const { return fx > 0.0 && fy > 0.0 && width >= 1 && height >= 1; }
    Vec3 position() const { return pose.t; }
};

// Row-major scalar maps. Depth in mm along the camera z axis, 0 = no hit.
// Instance ids are 1-based object indices, 0 = background.
struct DepthMap {
    int width = 0, height = 0;
    std::vector<float> values;

    float& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    float at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct InstanceMap {
    int width = 0, height = 0;
    std::vector<std::uint16_t> values;

    std::uint16_t& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

struct RenderedViews {
    DepthMap depth;
    InstanceMap instances;
};

// Casts one ray per pixel through every posed mesh; nearest hit wins.
RenderedViews render_depth(const std::vector<std::pair<const TriangleMesh*, Pose7DoF>>& scene,
                           const Camera& camera);

// DEPTHMAP v1: two text header lines, then width*height little-endian
// 32-bit floats, row-major, millimeters.
void save_depthmap(const DepthMap& map, const std::string& path);
DepthMap load_depthmap(const std::string& path);

// 16-bit binary PGM (P5, maxval 65535, big-endian samples per Netpbm).
void save_instancemap(const InstanceMap& map, const std::string& path);
InstanceMap load_instancemap(const std::string& path);

} // namespace scenekit
