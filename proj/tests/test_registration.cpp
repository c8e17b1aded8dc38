#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scenekit/errors.hpp"
#include "scenekit/registration/registration.hpp"
#include "scenekit/scenegen/primitives.hpp"
#include "support.hpp"

using namespace scenekit;

namespace {

// Perturbs a pose by a rotation of `deg` degrees about a random axis and a
// translation of `frac` times the object diameter.
RigidTransform perturb(const RigidTransform& T, double deg, double frac, double diameter,
                       CounterRng& rng) {
    Vec3 axis = test::random_unit_vector(rng);
    RigidTransform d{exp_so3(deg * M_PI / 180.0 * axis),
                     frac * diameter * test::random_unit_vector(rng)};
    return d * T;
}

double translation_error(const RigidTransform& a, const RigidTransform& b) {
    return (a.t - b.t).norm();
}

} // namespace

TEST_CASE("soft_l1: analytic values and asymptote") {
    CHECK(soft_l1(0.0, 4.5) == 0.0);
    double f = 4.5;
    CHECK(soft_l1(f * f, f) == doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
    // rho(s)/sqrt(s) -> 2/f for s -> inf.
    double s = 1e8 * f * f;
    CHECK(soft_l1(s, f) / std::sqrt(s) == doctest::Approx(2.0 / f).epsilon(2e-4));
}

TEST_CASE("residuals_distance: coincident copy gives zero residuals") {
    TriangleMesh bowl = make_bowl(30.0, 3.0);
    MeshBVH scene(bowl);
    auto samples = sample_surface(bowl, 200, 3);
    auto res = residuals_distance(RigidTransform::identity(), samples, scene);
    for (double r : res) CHECK(r <= 1e-7);
}

TEST_CASE("residuals_distance: offset plane gives constant residuals") {
    TriangleMesh plane({{-500, -500, 0}, {500, -500, 0}, {500, 500, 0}, {-500, 500, 0}},
                       {{0, 1, 2}, {0, 2, 3}});
    TriangleMesh object({{-20, -20, 0}, {20, -20, 0}, {20, 20, 0}, {-20, 20, 0}},
                        {{0, 1, 2}, {0, 2, 3}});
    MeshBVH scene(plane);
    auto samples = sample_surface(object, 100, 4);
    RigidTransform up{Quat::Identity(), {0, 0, 5}};
    auto res = residuals_distance(up, samples, scene);
    for (double r : res) CHECK(r == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("residuals_distance: matches per-sample brute force") {
    TriangleMesh cup = make_cup(25.0, 40.0, 3.0, 20);
    MeshBVH scene(cup);
    auto samples = sample_surface(cup, 50, 5);
    CounterRng rng(6);
    RigidTransform pose = perturb(RigidTransform::identity(), 10.0, 0.1, cup.diameter(), rng);
    auto res = residuals_distance(pose, samples, scene);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        Vec3 q = pose.apply(samples[i].point);
        double best = 1e300;
        for (std::size_t fidx = 0; fidx < cup.face_count(); ++fidx) {
            auto tri = cup.triangle(fidx);
            best = std::min(best,
                            (closest_point_on_triangle(q, tri[0], tri[1], tri[2]) - q).norm());
        }
        CHECK(std::abs(res[i] - best) < 1e-7);
    }
}

TEST_CASE("register_stage1: exact copy recovered from a perturbed init") {
    // Distinct box sides keep the pose fully observable; surfaces of
    // revolution would leave the spin about their axis unconstrained.
    TriangleMesh object = make_open_box({60, 45, 35}, 4.0);
    CounterRng rng(7);
    RigidTransform truth{exp_so3(Vec3(0.3, -0.2, 0.9)), {40, -25, 60}};
    TriangleMesh scan = object.transformed(truth);
    MeshBVH scene(scan);

    RegistrationConfig cfg;
    cfg.seed = 11;
    RigidTransform init = perturb(truth, 5.0, 0.05, object.diameter(), rng);
    auto result = register_stage1(object, scene, init, cfg);
    CHECK(geodesic_angle(result.pose.q, truth.q) < 1e-3);
    CHECK(translation_error(result.pose, truth) < 1e-3 * object.diameter());
    CHECK(result.mean_residual < 0.1);
}

TEST_CASE("register_stage1: exact init is a fixed point") {
    TriangleMesh object = make_bowl(28.0, 3.0, 12, 32);
    RigidTransform truth{exp_so3(Vec3(0.1, 0.4, -0.2)), {10, 20, 30}};
    TriangleMesh scan = object.transformed(truth);
    MeshBVH scene(scan);

    RegistrationConfig cfg;
    cfg.seed = 13;
    auto result = register_stage1(object, scene, truth, cfg);
    CHECK(geodesic_angle(result.pose.q, truth.q) < 1e-6);
    CHECK(translation_error(result.pose, truth) < 1e-6);
    CHECK(result.final_cost < 1e-9);
}

TEST_CASE("register cost history is non-increasing on the exact-copy fixture") {
    TriangleMesh object = make_cup(20.0, 35.0, 3.5, 20);
    CounterRng rng(17);
    RigidTransform truth{exp_so3(Vec3(-0.5, 0.2, 0.3)), {5, 15, -10}};
    TriangleMesh scan = object.transformed(truth);
    MeshBVH scene(scan);

    RegistrationConfig cfg;
    cfg.seed = 19;
    RigidTransform init = perturb(truth, 5.0, 0.05, object.diameter(), rng);
    auto result = register_object(object, scene, init, cfg);
    // The history concatenates both stages; each stage must not increase.
    int n1 = cfg.iterations_per_stage;
    for (int i = 1; i < n1; ++i)
        CHECK(result.cost_history[i] <= result.cost_history[i - 1] + 1e-9);
    for (std::size_t i = n1 + 1; i < result.cost_history.size(); ++i)
        CHECK(result.cost_history[i] <= result.cost_history[i - 1] + 1e-9);
}

TEST_CASE("register_stage2: exact-copy optimum is kept and inliers stay high") {
    TriangleMesh object = make_open_box({50, 40, 30}, 3.0);
    RigidTransform truth{exp_so3(Vec3(0.2, 0.1, -0.4)), {-20, 12, 44}};
    TriangleMesh scan = object.transformed(truth);
    MeshBVH scene(scan);

    RegistrationConfig cfg;
    cfg.seed = 23;
    auto result = register_stage2(object, scene, truth, cfg);
    CHECK(geodesic_angle(result.pose.q, truth.q) < 1e-6);
    CHECK(translation_error(result.pose, truth) < 1e-6);
    CHECK(result.inlier_fraction >= 0.99);
}

TEST_CASE("register_stage2: flipped plane has no normal-consistent sample") {
    TriangleMesh plane({{-30, -30, 0}, {30, -30, 0}, {30, 30, 0}, {-30, 30, 0}},
                       {{0, 1, 2}, {0, 2, 3}});
    MeshBVH scene(plane);
    // 180 degrees about x: same geometry, normals reversed.
    RigidTransform flipped{exp_so3(Vec3(M_PI, 0, 0)), {0, 0, 0}};
    RegistrationConfig cfg;
    cfg.seed = 29;
    try {
        register_stage2(plane, scene, flipped, cfg);
        FAIL("expected AllWeightsZero");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllWeightsZero);
    }
}

TEST_CASE("stage-2 normal gate boundary sits at the configured cosine") {
    // Large scan plane, small object plane tilted by theta. cos(44deg) > 0.7
    // passes the gate, cos(46deg) < 0.7 rejects every sample.
    TriangleMesh scan({{-400, -400, 0}, {400, -400, 0}, {400, 400, 0}, {-400, 400, 0}},
                      {{0, 1, 2}, {0, 2, 3}});
    TriangleMesh object({{-10, -10, 0}, {10, -10, 0}, {10, 10, 0}, {-10, 10, 0}},
                        {{0, 1, 2}, {0, 2, 3}});
    MeshBVH scene(scan);
    RegistrationConfig cfg;
    cfg.seed = 31;
    cfg.iterations_per_stage = 1;

    RigidTransform tilt44{exp_so3(Vec3(44.0 * M_PI / 180.0, 0, 0)), {0, 0, 2}};
    auto ok = register_stage2(object, scene, tilt44, cfg);
    CHECK(ok.inlier_fraction > 0.9);

    RigidTransform tilt46{exp_so3(Vec3(46.0 * M_PI / 180.0, 0, 0)), {0, 0, 2}};
    CHECK_THROWS_AS(register_stage2(object, scene, tilt46, cfg), Error);
}

TEST_CASE("register_object: defaults match the documented configuration") {
    RegistrationConfig cfg;
    CHECK(cfg.sample_count == 500);
    CHECK(cfg.f_scale == 4.5);
    CHECK(cfg.iterations_per_stage == 20);
    CHECK(cfg.normal_threshold == 0.7);
}

TEST_CASE("register_object: scene that cannot fit the object is Diverged") {
    // A large box cannot conform to a small sphere scan; the stage must
    // report divergence instead of returning whatever pose it stalled at.
    TriangleMesh object = make_box({100, 90, 80});
    TriangleMesh scan = make_sphere(5.0, 12, 24);
    MeshBVH scene(scan);
    RegistrationConfig cfg;
    cfg.seed = 37;
    RigidTransform init{Quat::Identity(), {300, 0, 0}};
    try {
        register_object(object, scene, init, cfg);
        FAIL("expected Diverged");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Diverged);
    }
}

TEST_CASE("register_object: frame equivariance under a global rigid motion") {
    TriangleMesh object = make_cup(22.0, 36.0, 3.0, 20);
    CounterRng rng(41);
    RigidTransform truth{exp_so3(Vec3(0.2, -0.3, 0.5)), {15, -10, 25}};
    TriangleMesh scan = object.transformed(truth);

    RigidTransform G{exp_so3(Vec3(1.1, 0.4, -0.7)), {-80, 120, 40}};
    TriangleMesh scan_g = scan.transformed(G);

    RegistrationConfig cfg;
    cfg.seed = 43;
    RigidTransform init = perturb(truth, 4.0, 0.04, object.diameter(), rng);

    MeshBVH scene_a(scan);
    MeshBVH scene_b(scan_g);
    auto base = register_object(object, scene_a, init, cfg);
    auto moved = register_object(object, scene_b, G * init, cfg);

    RigidTransform expected = G * base.pose;
    CHECK(geodesic_angle(moved.pose.q, expected.q) < 1e-6);
    CHECK((moved.pose.t - expected.t).norm() < 1e-6 * object.diameter());
}

TEST_CASE("register_object: identical inputs and seed give identical poses") {
    TriangleMesh object = make_bowl(26.0, 3.0, 10, 28);
    CounterRng rng(47);
    RigidTransform truth{exp_so3(Vec3(0.6, 0.1, -0.2)), {30, 5, -15}};
    TriangleMesh scan = object.transformed(truth);
    MeshBVH scene(scan);

    RegistrationConfig cfg;
    cfg.seed = 53;
    RigidTransform init = perturb(truth, 5.0, 0.05, object.diameter(), rng);
    auto a = register_object(object, scene, init, cfg);
    auto b = register_object(object, scene, init, cfg);
    CHECK(a.pose.t == b.pose.t);  // bitwise
    CHECK(a.pose.q.coeffs() == b.pose.q.coeffs());
    CHECK(a.final_cost == b.final_cost);
}

TEST_CASE("thin open box: stage 2 resolves the wall ambiguity stage 1 tolerates") {
    // Thin-walled open box; the init slides the object across one wall so
    // that walls land between the scan's double surfaces.
    TriangleMesh object = make_open_box({60, 60, 40}, 2.0);
    RigidTransform truth = RigidTransform::identity();
    TriangleMesh scan = object;
    MeshBVH scene(scan);

    RegistrationConfig cfg;
    cfg.seed = 59;
    RigidTransform init{Quat::Identity(), {2.0, 0, 0}};  // one wall thickness across

    auto s1 = register_stage1(object, scene, init, cfg);
    auto s2 = register_stage2(object, scene, s1.pose, cfg);

    // Stage 2 must end at least as normal-consistent and at least as close
    // to the truth as stage 1 on this fixture.
    CHECK(s2.inlier_fraction >= s1.inlier_fraction - 1e-9);
    double e1 = translation_error(s1.pose, truth);
    double e2 = translation_error(s2.pose, truth);
    CHECK(e2 <= e1 + 1e-6);
    CHECK(e2 < 0.5);  // stage 2 lands on the true pose
}
