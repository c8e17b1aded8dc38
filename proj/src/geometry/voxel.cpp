#include "scenekit/geometry/voxel.hpp"

#include "scenekit/errors.hpp"
#include "scenekit/geometry/bvh.hpp"
#include "scenekit/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace scenekit {

bool VoxelGrid::point_occupied(const Vec3& p) const {
    Vec3 rel = (p - origin) / voxel_size;
    int ix = static_cast<int>(std::floor(rel.x()));
    int iy = static_cast<int>(std::floor(rel.y()));
    int iz = static_cast<int>(std::floor(rel.z()));
    if (ix < 0 || iy < 0 || iz < 0 || ix >= dims[0] || iy >= dims[1] || iz >= dims[2])
        return false;
    return occupied(ix, iy, iz);
}

std::size_t VoxelGrid::occupied_count() const {
    std::size_t n = 0;
    for (bool b : occupancy) n += b ? 1 : 0;
    return n;
}

namespace {

// One parity sweep along `axis`. Votes are incremented for voxel centers with
// an odd crossing count behind them.
void parity_sweep(const MeshBVH& bvh, const VoxelGrid& grid, int axis,
                  std::vector<std::uint8_t>& votes) {
    int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    Vec3 dir = Vec3::Zero();
    dir[axis] = 1.0;
    const double vs = grid.voxel_size;
    const std::int64_t rows = static_cast<std::int64_t>(grid.dims[a1]) * grid.dims[a2];
    // Sub-voxel lateral offsets keep rays off shared triangle edges (face
    // diagonals of axis-aligned quads would otherwise be double-counted).
    const double j1 = 2.33e-4 * vs, j2 = 1.07e-4 * vs;

    parallel_for(rows, [&](std::int64_t begin, std::int64_t end) {
        std::vector<RayHit> hits;
        for (std::int64_t row = begin; row < end; ++row) {
            int i1 = static_cast<int>(row % grid.dims[a1]);
            int i2 = static_cast<int>(row / grid.dims[a1]);
            Vec3 o = grid.origin;
            o[a1] += (i1 + 0.5) * vs + j1;
            o[a2] += (i2 + 0.5) * vs + j2;
            o[axis] -= vs;  // start strictly outside the grid
            bvh.raycast_all(o, dir, hits);

            std::size_t next = 0;
            bool inside = false;
            for (int i = 0; i < grid.dims[axis]; ++i) {
                double t_center = (i + 1.5) * vs;  // center relative to the backed-off origin
                while (next < hits.size() && hits[next].t < t_center) {
                    inside = !inside;
                    ++next;
                }
                if (inside) {
                    int idx[3];
                    idx[axis] = i;
                    idx[a1] = i1;
                    idx[a2] = i2;
                    ++votes[grid.index(idx[0], idx[1], idx[2])];
                }
            }
        }
    });
}

} // namespace

VoxelGrid voxelize_solid_on_grid(const TriangleMesh& mesh, const Vec3& origin,
                                 double voxel_size, const std::array<int, 3>& dims) {
    if (voxel_size <= 0.0) fail(ErrorCode::DegenerateInput, "voxel_size must be positive");
    VoxelGrid grid;
    grid.origin = origin;
    grid.voxel_size = voxel_size;
    grid.dims = dims;
    grid.occupancy.assign(grid.cell_count(), false);
    if (mesh.empty()) return grid;

    MeshBVH bvh(mesh);
    std::vector<std::uint8_t> votes(grid.cell_count(), 0);
    for (int axis = 0; axis < 3; ++axis) parity_sweep(bvh, grid, axis, votes);
    for (std::size_t i = 0; i < votes.size(); ++i) grid.occupancy[i] = votes[i] >= 2;
    return grid;
}

VoxelGrid voxelize_solid(const TriangleMesh& mesh, double voxel_size, int padding) {
    if (mesh.empty()) fail(ErrorCode::EmptyMesh, "voxelize_solid on empty mesh");
    const Aabb& box = mesh.bounds();
    if (box.diagonal() <= 0.0)
        fail(ErrorCode::DegenerateMesh, "voxelize_solid: zero-extent bounding box");
    if (voxel_size <= 0.0) fail(ErrorCode::DegenerateInput, "voxel_size must be positive");

    std::array<int, 3> dims;
    for (int a = 0; a < 3; ++a) {
        double extent = box.extent()[a];
        int n = static_cast<int>(std::ceil(extent / voxel_size - 1e-9));
        dims[a] = std::max(1, n) + 2 * padding;
    }
    Vec3 origin = box.min - Vec3::Constant(padding * voxel_size);
    return voxelize_solid_on_grid(mesh, origin, voxel_size, dims);
}

} // namespace scenekit
