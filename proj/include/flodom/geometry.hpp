#pragma once

#include <Eigen/Core>
#include <vector>

namespace flodom {

using Point3 = Eigen::Vector3d;

// Ordered point list in the sensor frame, meters. Index identity matters:
// normals and flow vectors are aligned 1:1 with their cloud by position.
using PointCloud = std::vector<Point3>;

// Unit normals aligned 1:1 with a PointCloud.
using NormalField = std::vector<Eigen::Vector3d>;

// Per-point displacement vectors aligned 1:1 with a PointCloud, meters.
using FlowField = std::vector<Eigen::Vector3d>;

/// Rigid transform: p -> rotation * p + translation.
///
/// Convention used throughout: the pose estimated for a scan pair maps
/// frame-k points into frame-k+1 coordinates (it aligns the source cloud
/// with the target cloud). Trajectories are world-from-sensor, so the
/// sequence runner accumulates the inverse of each pair pose.
struct RigidPose {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static RigidPose identity() { return {}; }

    Point3 apply(const Point3& p) const { return rotation * p + translation; }
};

/// Euler parameterization [rx, ry, rz, tx, ty, tz], radians and meters.
/// The rotation it denotes is Rz(rz) * Ry(ry) * Rx(rx).
struct EulerPose6 {
    double rx = 0.0, ry = 0.0, rz = 0.0;
    double tx = 0.0, ty = 0.0, tz = 0.0;

    double rotation_norm() const;
    double translation_norm() const;
    double norm() const;
};

/// Max deviation of R from a proper rotation: max(|R^T R - I|_inf, |det R - 1|).
double orthonormality_error(const Eigen::Matrix3d& rotation);

/// Nearest rotation matrix in the Frobenius sense (SVD projection, det +1).
Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m);

/// Rotation angle of R in radians, acos((tr - 1)/2) with clamped argument.
double rotation_angle(const Eigen::Matrix3d& rotation);

PointCloud transform_cloud(const PointCloud& cloud, const RigidPose& pose);

/// compose(outer, inner) applies inner first: result(p) = outer(inner(p)).
/// R = Ro * Ri, T = Ro * Ti + To. Re-orthonormalizes the product if
/// accumulated floating-point drift exceeds 1e-9.
RigidPose compose(const RigidPose& outer, const RigidPose& inner);

RigidPose invert(const RigidPose& pose);

/// R = Rz(rz) * Ry(ry) * Rx(rx); that multiplication order is normative
/// everywhere in this codebase.
RigidPose euler_to_pose(const EulerPose6& e);

/// Inverse of euler_to_pose. Throws GimbalLock when |R(2,0)| > 1 - 1e-9
/// (pitch within ~1e-4 deg of +-pi/2).
EulerPose6 pose_to_euler(const RigidPose& pose);

}  // namespace flodom
