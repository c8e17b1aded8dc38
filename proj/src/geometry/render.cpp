#include "scenekit/geometry/render.hpp"

#include "scenekit/errors.hpp"
#include "scenekit/geometry/bvh.hpp"
#include "scenekit/parallel.hpp"

#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace scenekit {

RenderedViews render_depth(const std::vector<std::pair<const TriangleMesh*, Pose7DoF>>& scene,
                           const Camera& camera) {
    if (!camera.valid()) fail(ErrorCode::DegenerateInput, "render_depth: invalid camera");

    RenderedViews out;
    out.depth.width = out.instances.width = camera.width;
    out.depth.height = out.instances.height = camera.height;
    out.depth.values.assign(static_cast<std::size_t>(camera.width) * camera.height, 0.0f);
    out.instances.values.assign(static_cast<std::size_t>(camera.width) * camera.height, 0);

    // Bake poses once; per-object BVHs answer all pixels.
    std::vector<TriangleMesh> posed;
    posed.reserve(scene.size());
    for (const auto& [mesh, pose] : scene) posed.push_back(mesh->transformed(pose));
    std::vector<std::unique_ptr<MeshBVH>> trees;
    trees.reserve(posed.size());
    for (const auto& m : posed) trees.push_back(std::make_unique<MeshBVH>(m));

    const Vec3 origin = camera.position();
    const Eigen::Matrix3d rot = camera.pose.q.toRotationMatrix();

    parallel_for(camera.height, [&](std::int64_t y0, std::int64_t y1) {
        for (std::int64_t y = y0; y < y1; ++y) {
            for (int x = 0; x < camera.width; ++x) {
                // Unit z-depth parameterization: with dir_cam.z == 1 the ray
                // parameter t equals depth along the camera z axis.
                Vec3 dir_cam((x + 0.5 - camera.cx) / camera.fx,
                             (y + 0.5 - camera.cy) / camera.fy, 1.0);
                Vec3 dir = rot * dir_cam;
                double best = std::numeric_limits<double>::infinity();
                std::uint16_t id = 0;
                for (std::size_t k = 0; k < trees.size(); ++k) {
                    auto hit = trees[k]->raycast(origin, dir);
                    if (hit && hit->t < best) {
                        best = hit->t;
                        id = static_cast<std::uint16_t>(k + 1);
                    }
                }
                if (id != 0) {
                    out.depth.at(x, static_cast<int>(y)) = static_cast<float>(best);
                    out.instances.at(x, static_cast<int>(y)) = id;
                }
            }
        }
    });
    return out;
}

void save_depthmap(const DepthMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write depth map: " + path);
    out << "DEPTHMAP v1\n" << map.width << " " << map.height << "\n";
    static_assert(sizeof(float) == 4);
    out.write(reinterpret_cast<const char*>(map.values.data()),
              static_cast<std::streamsize>(map.values.size() * 4));
    if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

DepthMap load_depthmap(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open depth map: " + path);
    std::string magic;
    std::getline(in, magic);
    if (magic != "DEPTHMAP v1") fail(ErrorCode::Parse, path + ": bad depth map header");
    DepthMap map;
    std::string dims_line;
    std::getline(in, dims_line);
    std::istringstream ds(dims_line);
    if (!(ds >> map.width >> map.height) || map.width < 1 || map.height < 1)
        fail(ErrorCode::Parse, path + ": bad depth map dimensions");
    map.values.resize(static_cast<std::size_t>(map.width) * map.height);
    in.read(reinterpret_cast<char*>(map.values.data()),
            static_cast<std::streamsize>(map.values.size() * 4));
    if (!in) fail(ErrorCode::Parse, path + ": truncated depth map");
    return map;
}

void save_instancemap(const InstanceMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::Io, "cannot write instance map: " + path);
    out << "P5\n" << map.width << " " << map.height << "\n65535\n";
    for (std::uint16_t v : map.values) {
        unsigned char hi = static_cast<unsigned char>(v >> 8);
        unsigned char lo = static_cast<unsigned char>(v & 0xFF);
        out.put(static_cast<char>(hi));
        out.put(static_cast<char>(lo));
    }
    if (!out) fail(ErrorCode::Io, "write failed: " + path);
}

InstanceMap load_instancemap(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot open instance map: " + path);
    std::string magic;
    in >> magic;
    if (magic != "P5") fail(ErrorCode::Parse, path + ": not a binary PGM");
    int width = 0, height = 0, maxval = 0;
    in >> width >> height >> maxval;
    if (width < 1 || height < 1 || maxval != 65535)
        fail(ErrorCode::Parse, path + ": expected 16-bit PGM");
    in.get(); // single whitespace after maxval
    InstanceMap map;
    map.width = width;
    map.height = height;
    map.values.resize(static_cast<std::size_t>(width) * height);
    for (auto& v : map.values) {
        int hi = in.get(), lo = in.get();
        if (hi < 0 || lo < 0) fail(ErrorCode::Parse, path + ": truncated PGM");
        v = static_cast<std::uint16_t>((hi << 8) | lo);
    }
    return map;
}

} // namespace scenekit
