#include "flodom/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "flodom/errors.hpp"

namespace flodom {

namespace {
constexpr double kOrthoDriftTol = 1e-9;
}

double EulerPose6::rotation_norm() const { return std::sqrt(rx * rx + ry * ry + rz * rz); }

double EulerPose6::translation_norm() const { return std::sqrt(tx * tx + ty * ty + tz * tz); }

double EulerPose6::norm() const {
    return std::sqrt(rx * rx + ry * ry + rz * rz + tx * tx + ty * ty + tz * tz);
}

double orthonormality_error(const Eigen::Matrix3d& rotation) {
    const Eigen::Matrix3d gram_err = rotation.transpose() * rotation - Eigen::Matrix3d::Identity();
    return std::max(gram_err.cwiseAbs().maxCoeff(), std::abs(rotation.determinant() - 1.0));
}

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    return r;
}

double rotation_angle(const Eigen::Matrix3d& rotation) {
    const double c = 0.5 * (rotation.trace() - 1.0);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

PointCloud transform_cloud(const PointCloud& cloud, const RigidPose& pose) {
    PointCloud out;
    out.reserve(cloud.size());
    for (const auto& p : cloud) out.push_back(pose.rotation * p + pose.translation);
    return out;
}

RigidPose compose(const RigidPose& outer, const RigidPose& inner) {
    RigidPose out;
    out.rotation = outer.rotation * inner.rotation;
    out.translation = outer.rotation * inner.translation + outer.translation;
    // Long trajectory accumulations compound rounding; project back onto
    // SO(3) only when the drift is measurable.
    if (orthonormality_error(out.rotation) > kOrthoDriftTol)
        out.rotation = nearest_rotation(out.rotation);
    return out;
}

RigidPose invert(const RigidPose& pose) {
    RigidPose out;
    out.rotation = pose.rotation.transpose();
    out.translation = -(out.rotation * pose.translation);
    return out;
}

RigidPose euler_to_pose(const EulerPose6& e) {
    const double ca = std::cos(e.rx), sa = std::sin(e.rx);
    const double cb = std::cos(e.ry), sb = std::sin(e.ry);
    const double cc = std::cos(e.rz), sc = std::sin(e.rz);

    Eigen::Matrix3d rx, ry, rz;
    rx << 1, 0, 0,
          0, ca, -sa,
          0, sa, ca;
    ry << cb, 0, sb,
          0, 1, 0,
          -sb, 0, cb;
    rz << cc, -sc, 0,
          sc, cc, 0,
          0, 0, 1;

    RigidPose out;
    out.rotation = rz * ry * rx;
    out.translation = Eigen::Vector3d(e.tx, e.ty, e.tz);
    return out;
}

EulerPose6 pose_to_euler(const RigidPose& pose) {
    const Eigen::Matrix3d& r = pose.rotation;
    if (std::abs(r(2, 0)) > 1.0 - 1e-9) throw GimbalLock();

    EulerPose6 e;
    e.ry = std::asin(-r(2, 0));
    e.rx = std::atan2(r(2, 1), r(2, 2));
    e.rz = std::atan2(r(1, 0), r(0, 0));
    e.tx = pose.translation.x();
    e.ty = pose.translation.y();
    e.tz = pose.translation.z();
    return e;
}

}  // namespace flodom
