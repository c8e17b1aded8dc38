#include "scenekit/registration/registration.hpp"

#include "scenekit/errors.hpp"
#include "scenekit/parallel.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace scenekit {

double soft_l1(double s, double f) {
    return 2.0 * (std::sqrt(1.0 + s / (f * f)) - 1.0);
}

namespace {

constexpr int kMaxInnerSteps = 10;  // accepted steps per closest-point linearization

// rho'(s) and rho''(s) for the soft-l1 loss.
inline void soft_l1_derivs(double s, double f, double& d1, double& d2) {
    double f2 = f * f;
    double u = std::sqrt(1.0 + s / f2);
    d1 = 1.0 / (f2 * u);
    d2 = -0.5 / (f2 * f2 * u * u * u);
}

struct SampleState {
    Vec3 foot;          // fixed closest point for the current linearization
    Vec3 rotated;       // R * p_i (lever arm for the rotation block)
    Vec3 error;         // transformed point minus foot
    double residual;    // |error|
    double weight;      // normal gate weight (1 for stage 1)
};

struct Evaluation {
    std::vector<SampleState> states;
    double cost = 0.0;           // sum of rho((w r)^2)
    double mean_residual = 0.0;  // mean unweighted residual
    int positive_weights = 0;
};

// Closest points, residuals and gate weights at `pose`. Parallel over
// samples; every output lands in a preallocated slot so the result is
// independent of the worker count.
Evaluation evaluate(const RigidTransform& pose, const std::vector<SurfaceSample>& samples,
                    const MeshBVH& scene, const RegistrationConfig& cfg, bool use_normals) {
    Evaluation ev;
    ev.states.resize(samples.size());
    parallel_for(static_cast<std::int64_t>(samples.size()), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) {
            const SurfaceSample& s = samples[i];
            SampleState& st = ev.states[i];
            st.rotated = pose.rotate(s.point);
            Vec3 y = st.rotated + pose.t;
            ClosestPoint cp = scene.closest_point(y);
            st.foot = cp.point;
            st.error = y - cp.point;
            st.residual = cp.distance;
            if (use_normals) {
                double c = pose.rotate(s.normal).dot(scene.mesh().face_normals()[cp.face]);
                st.weight = c >= cfg.normal_threshold ? c : 0.0;
            } else {
                st.weight = 1.0;
            }
        }
    });
    for (const SampleState& st : ev.states) {
        double wr = st.weight * st.residual;
        ev.cost += soft_l1(wr * wr, cfg.f_scale);
        ev.mean_residual += st.residual;
        if (st.weight > 0.0) ++ev.positive_weights;
    }
    ev.mean_residual /= static_cast<double>(samples.size());
    return ev;
}

// Objective at `pose` against frozen feet and weights (the inner LM model).
double fixed_foot_cost(const RigidTransform& pose, const std::vector<SurfaceSample>& samples,
                       const std::vector<SampleState>& states, double f) {
    double cost = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        double r = (pose.apply(samples[i].point) - states[i].foot).norm();
        double wr = states[i].weight * r;
        cost += soft_l1(wr * wr, f);
    }
    return cost;
}

RegistrationResult run_stage(const TriangleMesh& object, const MeshBVH& scene,
                             const RigidTransform& init, const RegistrationConfig& cfg,
                             bool use_normals) {
    if (cfg.sample_count < 3) fail(ErrorCode::DegenerateInput, "sample_count must be >= 3");
    if (cfg.iterations_per_stage < 1) fail(ErrorCode::DegenerateInput, "iterations must be >= 1");
    if (cfg.f_scale <= 0.0) fail(ErrorCode::DegenerateInput, "f_scale must be positive");

    auto samples = sample_surface(object, static_cast<std::size_t>(cfg.sample_count), cfg.seed);

    RegistrationResult result;
    result.pose = init;
    RigidTransform pose = init;
    double lambda = 1e-4;
    Evaluation ev;

    for (int iter = 0; iter < cfg.iterations_per_stage; ++iter) {
        ev = evaluate(pose, samples, scene, cfg, use_normals);
        result.cost_history.push_back(ev.cost);

        if (use_normals && ev.positive_weights == 0)
            fail(ErrorCode::AllWeightsZero,
                 "no sample passes the normal gate; initialization is inconsistent with the scan");

        if (iter == 0) {
            Aabb feet = Aabb::empty();
            for (const auto& st : ev.states) feet.expand(st.foot);
            if (feet.diagonal() < 1e-9)
                fail(ErrorCode::DegenerateInput, "all residuals target a single scene point");
        }

        // LM step sequence against the frozen feet: accepted steps re-linearize
        // at the new pose (feet and weights stay fixed); damping failures are
        // capped at max_inner_retries for the whole sequence.
        double base_cost = ev.cost;
        int retries = 0;
        for (int step = 0; step < kMaxInnerSteps && retries <= cfg.max_inner_retries; ++step) {
            // Gauss-Newton on the 3-vector residual w*(y - foot) per sample
            // with the Triggs second-order robust correction. soft-l1 keeps
            // rho' + 2 rho'' s positive, so H stays positive semidefinite.
            Eigen::Matrix<double, 6, 6> H = Eigen::Matrix<double, 6, 6>::Zero();
            Vec6 g = Vec6::Zero();
            Eigen::Matrix<double, 3, 6> J;
            for (std::size_t i = 0; i < samples.size(); ++i) {
                const SampleState& st = ev.states[i];
                if (st.weight <= 0.0) continue;
                Vec3 rotated = pose.rotate(samples[i].point);
                Vec3 error = rotated + pose.t - st.foot;
                double w2 = st.weight * st.weight;
                double s = w2 * error.squaredNorm();
                double d1, d2;
                soft_l1_derivs(s, cfg.f_scale, d1, d2);

                // d y / d [omega, t] = [-[R p]_x, I].
                J.setZero();
                J(0, 1) = rotated.z();
                J(0, 2) = -rotated.y();
                J(1, 0) = -rotated.z();
                J(1, 2) = rotated.x();
                J(2, 0) = rotated.y();
                J(2, 1) = -rotated.x();
                J(0, 3) = J(1, 4) = J(2, 5) = 1.0;

                Vec6 jte = J.transpose() * error;
                H.noalias() += (w2 * d1) * (J.transpose() * J);
                H.noalias() += (2.0 * d2 * w2 * w2) * (jte * jte.transpose());
                g.noalias() += (w2 * d1) * jte;
            }

            // Blockwise trace damping is rotation-equivariant, unlike diag(H).
            double d_rot = std::max(H.topLeftCorner<3, 3>().trace() / 3.0, 1e-12);
            double d_tr = std::max(H.bottomRightCorner<3, 3>().trace() / 3.0, 1e-12);

            bool accepted = false;
            while (retries <= cfg.max_inner_retries) {
                Eigen::Matrix<double, 6, 6> A = H;
                for (int k = 0; k < 3; ++k) {
                    A(k, k) += lambda * d_rot;
                    A(k + 3, k + 3) += lambda * d_tr;
                }
                Vec6 delta = A.ldlt().solve(-g);
                RigidTransform candidate = retract(pose, delta);
                double cand_cost = fixed_foot_cost(candidate, samples, ev.states, cfg.f_scale);
                if (cand_cost < base_cost) {
                    pose = candidate;
                    base_cost = cand_cost;
                    lambda = std::max(lambda / 3.0, 1e-12);
                    accepted = true;
                    break;
                }
                lambda *= 4.0;
                ++retries;
            }
            if (!accepted) break;
        }
        // If no damping value decreased the model cost the pose is kept; the
        // divergence check below decides whether the stage is acceptable.
    }

    ev = evaluate(pose, samples, scene, cfg, true);  // final gate stats for both stages
    result.pose = pose;
    result.stage1_pose = pose;
    result.mean_residual = ev.mean_residual;
    result.inlier_fraction =
        static_cast<double>(ev.positive_weights) / static_cast<double>(samples.size());
    // Report the stage objective (weighted only for the normal-aware stage).
    if (use_normals) {
        result.final_cost = ev.cost;
    } else {
        double cost = 0.0;
        for (const auto& st : ev.states) cost += soft_l1(st.residual * st.residual, cfg.f_scale);
        result.final_cost = cost;
    }

    if (result.mean_residual > cfg.reject_threshold())
        fail(ErrorCode::Diverged,
             "registration stage ended with mean residual " + std::to_string(result.mean_residual) +
                 " mm above the reject threshold");
    return result;
}

} // namespace

std::vector<double> residuals_distance(const RigidTransform& pose,
                                       const std::vector<SurfaceSample>& samples,
                                       const MeshBVH& scene) {
    if (samples.empty()) fail(ErrorCode::DegenerateInput, "residuals_distance needs samples");
    std::vector<double> res(samples.size());
    parallel_for(static_cast<std::int64_t>(samples.size()), [&](std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i)
            res[i] = scene.closest_point(pose.apply(samples[i].point)).distance;
    });
    return res;
}

RegistrationResult register_stage1(const TriangleMesh& object, const MeshBVH& scene,
                                   const RigidTransform& init, const RegistrationConfig& cfg) {
    return run_stage(object, scene, init, cfg, false);
}

RegistrationResult register_stage2(const TriangleMesh& object, const MeshBVH& scene,
                                   const RigidTransform& stage1_pose,
                                   const RegistrationConfig& cfg) {
    return run_stage(object, scene, stage1_pose, cfg, true);
}

RegistrationResult register_object(const TriangleMesh& object, const MeshBVH& scene,
                                   const RigidTransform& init, const RegistrationConfig& cfg) {
    RegistrationResult s1 = register_stage1(object, scene, init, cfg);
    RegistrationResult s2 = register_stage2(object, scene, s1.pose, cfg);
    RegistrationResult out = s2;
    out.stage1_pose = s1.pose;
    out.stage1_cost = s1.final_cost;
    out.cost_history = s1.cost_history;
    out.cost_history.insert(out.cost_history.end(), s2.cost_history.begin(), s2.cost_history.end());
    return out;
}

} // namespace scenekit
