#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cmath>

namespace scenekit {

using Vec3 = Eigen::Vector3d;
using Quat = Eigen::Quaterniond;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Unit-quaternion exponential of an axis-angle 3-vector, small-angle safe.
inline Quat exp_so3(const Vec3& omega) {
    double theta = omega.norm();
    if (theta < 1e-12) {
        Quat q(1.0, 0.5 * omega.x(), 0.5 * omega.y(), 0.5 * omega.z());
        q.normalize();
        return q;
    }
    double half = 0.5 * theta;
    double s = std::sin(half) / theta;
    return Quat(std::cos(half), s * omega.x(), s * omega.y(), s * omega.z());
}

// SE(3): rotation quaternion + translation in millimeters.
struct RigidTransform {
    Quat q{1.0, 0.0, 0.0, 0.0};
    Vec3 t{0.0, 0.0, 0.0};

    static RigidTransform identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return q * p + t; }
    Vec3 rotate(const Vec3& v) const { return q * v; }

    RigidTransform inverse() const {
        Quat qi = q.conjugate();
        return {qi, qi * (-t)};
    }

    Eigen::Matrix4d matrix() const {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m.topLeftCorner<3, 3>() = q.toRotationMatrix();
        m.topRightCorner<3, 1>() = t;
        return m;
    }
};

// A * B applies B first.
inline RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
    return {(a.q * b.q).normalized(), a.q * b.t + a.t};
}

// Local 6-DoF chart used by the solvers: axis-angle increment applied on the
// left of the rotation, additive translation. retract(T, 0) == T.
inline RigidTransform retract(const RigidTransform& T, const Vec6& delta) {
    return {(exp_so3(delta.head<3>()) * T.q).normalized(), T.t + delta.tail<3>()};
}

// Sim(3): isotropic scale on top of a rigid transform. apply() computes
// sigma * R(q) * p + t.
struct Sim3Transform {
    Quat q{1.0, 0.0, 0.0, 0.0};
    Vec3 t{0.0, 0.0, 0.0};
    double sigma = 1.0;

    static Sim3Transform identity() { return {}; }

    Vec3 apply(const Vec3& p) const { return sigma * (q * p) + t; }

    Sim3Transform inverse() const {
        Quat qi = q.conjugate();
        return {qi, qi * (-t) / sigma, 1.0 / sigma};
    }

    Eigen::Matrix4d matrix() const {
        Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
        m.topLeftCorner<3, 3>() = sigma * q.toRotationMatrix();
        m.topRightCorner<3, 1>() = t;
        return m;
    }

    static Sim3Transform from_rigid(const RigidTransform& T) { return {T.q, T.t, 1.0}; }
};

// 7-DoF pose (q, t, sigma); shares the Sim(3) layout and operations.
using Pose7DoF = Sim3Transform;

inline Sim3Transform operator*(const Sim3Transform& a, const Sim3Transform& b) {
    return {(a.q * b.q).normalized(), a.sigma * (a.q * b.t) + a.t, a.sigma * b.sigma};
}

// Canonicalizes to w >= 0; recomposition reproduces the input.
inline Pose7DoF decompose_sim3(const Sim3Transform& T) {
    Pose7DoF p = T;
    p.q.normalize();
    if (p.q.w() < 0.0) p.q.coeffs() = -p.q.coeffs();
    return p;
}

inline double quat_dot(const Quat& a, const Quat& b) {
    return a.w() * b.w() + a.x() * b.x() + a.y() * b.y() + a.z() * b.z();
}

// 1 - <q, q_hat>^2, sign-invariant under the quaternion double cover.
inline double quaternion_loss(const Quat& q, const Quat& q_hat) {
    double d = quat_dot(q.normalized(), q_hat.normalized());
    double v = 1.0 - d * d;
    return v < 0.0 ? 0.0 : v;
}

// Geodesic distance on SO(3): 2*acos(|<q, q_hat>|), in [0, pi].
inline double geodesic_angle(const Quat& q, const Quat& q_hat) {
    double d = std::abs(quat_dot(q.normalized(), q_hat.normalized()));
    if (d > 1.0) d = 1.0;
    return 2.0 * std::acos(d);
}

// Gradient of quaternion_loss w.r.t. the left axis-angle chart of q
// (q(omega) = exp_so3(omega) * q), evaluated at omega = 0.
inline Vec3 quaternion_loss_grad(const Quat& q, const Quat& q_hat) {
    Quat qn = q.normalized();
    Quat qh = q_hat.normalized();
    double d = quat_dot(qn, qh);
    Vec3 g;
    for (int k = 0; k < 3; ++k) {
        Vec3 e = Vec3::Zero();
        e[k] = 0.5;
        Quat dq = Quat(0.0, e.x(), e.y(), e.z()) * qn;
        g[k] = -2.0 * d * quat_dot(dq, qh);
    }
    return g;
}

} // namespace scenekit
