#pragma once

#include "scenekit/geometry/mesh.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace scenekit {

// Solid occupancy lattice. A voxel is occupied iff its center is inside the
// mesh by a 3-axis majority parity vote, so near-watertight scan meshes
// degrade gracefully instead of erroring.
struct VoxelGrid {
    Vec3 origin{0.0, 0.0, 0.0};   // min corner, mm
    double voxel_size = 1.0;      // mm
    std::array<int, 3> dims{0, 0, 0};
    std::vector<bool> occupancy;  // x fastest, then y, then z

    std::size_t cell_count() const {
        return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
    }
    std::size_t index(int ix, int iy, int iz) const {
        return static_cast<std::size_t>(ix) +
               static_cast<std::size_t>(dims[0]) * (static_cast<std::size_t>(iy) +
                                                    static_cast<std::size_t>(dims[1]) * iz);
    }
    bool occupied(int ix, int iy, int iz) const { return occupancy[index(ix, iy, iz)]; }

    // True iff the point falls inside the grid and its containing voxel is occupied.
    bool point_occupied(const Vec3& p) const;

    std::size_t occupied_count() const;
    double occupied_volume() const {
        return static_cast<double>(occupied_count()) * voxel_size * voxel_size * voxel_size;
    }
};

VoxelGrid voxelize_solid(const TriangleMesh& mesh, double voxel_size, int padding = 0);

// Same inside test on a caller-supplied lattice (shared grids for IoU).
VoxelGrid voxelize_solid_on_grid(const TriangleMesh& mesh, const Vec3& origin,
                                 double voxel_size, const std::array<int, 3>& dims);

} // namespace scenekit
