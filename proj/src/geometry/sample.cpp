#include "scenekit/geometry/sample.hpp"

#include "scenekit/errors.hpp"
#include "scenekit/rng.hpp"

#include <algorithm>
#include <cmath>

namespace scenekit {

std::vector<SurfaceSample> sample_surface(const TriangleMesh& mesh, std::size_t count,
                                          std::uint64_t seed) {
    if (mesh.empty()) fail(ErrorCode::EmptyMesh, "sample_surface on empty mesh");
    if (count < 1) fail(ErrorCode::DegenerateInput, "sample_surface needs count >= 1");

    // Cumulative area table for proportional face selection.
    std::vector<double> cum(mesh.face_count());
    double acc = 0.0;
    for (std::size_t i = 0; i < mesh.face_count(); ++i) {
        acc += mesh.face_areas()[i];
        cum[i] = acc;
    }

    CounterRng rng(seed);
    std::vector<SurfaceSample> samples(count);
    double weight = mesh.surface_area() / static_cast<double>(count);
    for (std::size_t i = 0; i < count; ++i) {
        double u = rng.next_double() * acc;
        std::size_t face = static_cast<std::size_t>(
            std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
        if (face >= mesh.face_count()) face = mesh.face_count() - 1;

        // sqrt trick gives uniform barycentric coordinates.
        double r1 = std::sqrt(rng.next_double());
        double r2 = rng.next_double();
        auto tri = mesh.triangle(face);
        Vec3 p = (1.0 - r1) * tri[0] + r1 * (1.0 - r2) * tri[1] + r1 * r2 * tri[2];

        samples[i] = {p, mesh.face_normals()[face], static_cast<std::uint32_t>(face), weight};
    }
    return samples;
}

std::vector<Vec3> sample_points(const TriangleMesh& mesh, std::size_t count, std::uint64_t seed) {
    auto samples = sample_surface(mesh, count, seed);
    std::vector<Vec3> pts(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) pts[i] = samples[i].point;
    return pts;
}

} // namespace scenekit
