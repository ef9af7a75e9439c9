#pragma once

#include <Eigen/Core>

#include "flodom/geometry.hpp"

namespace flodom {

/// Linearized point-to-plane system. Row j is [s x n, n] against
/// b_j = n . (g - s), where s is the refined source point, g the generated
/// target point and n the matched unit normal. Minimizing |A x - b|^2 over
/// x = [rx, ry, rz, tx, ty, tz] is the small-angle point-to-plane ICP step.
struct P2PlSystem {
    Eigen::Matrix<double, Eigen::Dynamic, 6> A;
    Eigen::VectorXd b;
    // Originals kept for residual evaluation with the reconstructed (exact,
    // not linearized) pose.
    PointCloud source;
    PointCloud generated;
    NormalField normals;
};

struct SolveReport {
    RigidPose pose;
    EulerPose6 x;
    double residual_before = 0.0;  // mean |n . (s - g)|, identity pose
    double residual_after = 0.0;   // mean |n . (R s + T - g)|
    int rank = 0;                  // singular values kept by the cutoff
    double smallest_kept_singular_value = 0.0;
};

enum class SolverVariant {
    PointToPlane,  // linearized system solved via SVD pseudo-inverse
    PointToPoint,  // closed-form Kabsch alignment on the index-paired clouds
};

/// Each generated point adopts the normal of its nearest real target point
/// (ties to the lower target index).
NormalField match_normals(const PointCloud& generated_target, const PointCloud& target,
                          const NormalField& target_normals);

P2PlSystem build_system(const PointCloud& refined_source, const PointCloud& generated_target,
                        const NormalField& matched_normals);

/// Minimum-norm least-squares solve of the system through a truncated SVD
/// pseudo-inverse: singular values below sv_cutoff * sigma_max are zeroed,
/// which keeps degenerate directions (planar scenes) out of the estimate.
SolveReport solve_svd(const P2PlSystem& system, double sv_cutoff);

/// Closed-form rigid alignment minimizing sum |R s + T - g|^2 over the
/// index-paired clouds (the point-to-point ablation solver).
RigidPose solve_point_to_point(const PointCloud& refined_source,
                               const PointCloud& generated_target);

/// match_normals -> build_system -> solve. With the point-to-point variant
/// the pose comes from the Kabsch alignment instead, but the report still
/// carries point-to-plane residuals so variants compare on one scale.
SolveReport solve_pair(const PointCloud& refined_source, const PointCloud& generated_target,
                       const PointCloud& target, const NormalField& target_normals,
                       double sv_cutoff,
                       SolverVariant variant = SolverVariant::PointToPlane);

}  // namespace flodom
