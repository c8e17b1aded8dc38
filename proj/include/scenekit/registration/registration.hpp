#pragma once

#include "scenekit/geometry/bvh.hpp"
#include "scenekit/geometry/sample.hpp"
#include "scenekit/pose/transform.hpp"

#include <cstdint>
#include <vector>

namespace scenekit {

struct RegistrationConfig {
    int sample_count = 500;         // M surface samples per stage
    int iterations_per_stage = 20;  // outer closest-point iterations
    double f_scale = 4.5;           // soft-l1 f parameter, mm
    double normal_threshold = 0.7;  // cosine gate for stage-2 weights
    std::uint64_t seed = 0;
    int max_inner_retries = 10;     // LM damping retries per outer iteration
    // A stage whose final mean residual exceeds this is reported as Diverged
    // instead of returning a silently bad pose. <= 0 picks 5 * f_scale.
    double reject_mean_residual = 0.0;

    double reject_threshold() const {
        return reject_mean_residual > 0.0 ? reject_mean_residual : 5.0 * f_scale;
    }
};

struct RegistrationResult {
    RigidTransform pose;         // final pose of the stage (or of stage 2 for register_object)
    RigidTransform stage1_pose;  // pose after the distance-only stage
    double stage1_cost = 0.0;
    double final_cost = 0.0;
    double mean_residual = 0.0;    // mean unweighted point-to-surface residual, mm
    double inlier_fraction = 0.0;  // fraction of samples passing the normal gate
    std::vector<double> cost_history;  // objective at the start of each outer iteration
};

// Soft-l1 robust loss rho(s) = 2(sqrt(1 + s/f^2) - 1) on squared residuals.
double soft_l1(double s, double f);

// One nonnegative point-to-surface residual per sample under `pose`.
std::vector<double> residuals_distance(const RigidTransform& pose,
                                       const std::vector<SurfaceSample>& samples,
                                       const MeshBVH& scene);

// Distance-only robust refinement (stage 1).
RegistrationResult register_stage1(const TriangleMesh& object, const MeshBVH& scene,
                                   const RigidTransform& init, const RegistrationConfig& cfg);

// Normal-aware refinement (stage 2): residuals weighted by the gated cosine
// between object and scene normals, re-evaluated at each outer iteration.
RegistrationResult register_stage2(const TriangleMesh& object, const MeshBVH& scene,
                                   const RigidTransform& stage1_pose,
                                   const RegistrationConfig& cfg);

// Both stages chained; the result carries the intermediate stage-1 pose.
RegistrationResult register_object(const TriangleMesh& object, const MeshBVH& scene,
                                   const RigidTransform& init, const RegistrationConfig& cfg);

} // namespace scenekit
