#include "flodom/solver.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "flodom/errors.hpp"
#include "flodom/kdtree.hpp"

namespace flodom {

NormalField match_normals(const PointCloud& generated_target, const PointCloud& target,
                          const NormalField& target_normals) {
    if (target.empty()) throw EmptyCloud("match_normals: empty target");
    if (target_normals.size() != target.size())
        throw SizeMismatch("match_normals: normals not aligned with target");

    const KdTree3 tree(target);
    NormalField out;
    out.reserve(generated_target.size());
    for (const auto& g : generated_target)
        out.push_back(target_normals[static_cast<std::size_t>(tree.nearest(g).index)]);
    return out;
}

P2PlSystem build_system(const PointCloud& refined_source, const PointCloud& generated_target,
                        const NormalField& matched_normals) {
    const std::size_t n = refined_source.size();
    if (generated_target.size() != n || matched_normals.size() != n)
        throw SizeMismatch("build_system: inputs not aligned");
    if (n < 6) throw TooFewPoints("build_system: need at least 6 points");

    P2PlSystem sys;
    sys.A.resize(static_cast<Eigen::Index>(n), 6);
    sys.b.resize(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
        const Eigen::Vector3d& s = refined_source[j];
        const Eigen::Vector3d& g = generated_target[j];
        const Eigen::Vector3d& nrm = matched_normals[j];
        const Eigen::Vector3d a = s.cross(nrm);
        const auto row = static_cast<Eigen::Index>(j);
        sys.A.block<1, 3>(row, 0) = a.transpose();
        sys.A.block<1, 3>(row, 3) = nrm.transpose();
        sys.b(row) = nrm.dot(g) - nrm.dot(s);
    }
    sys.source = refined_source;
    sys.generated = generated_target;
    sys.normals = matched_normals;
    return sys;
}

namespace {

double mean_plane_residual(const PointCloud& source, const PointCloud& generated,
                           const NormalField& normals, const RigidPose& pose) {
    double sum = 0.0;
    for (std::size_t j = 0; j < source.size(); ++j)
        sum += std::abs(normals[j].dot(pose.apply(source[j]) - generated[j]));
    return sum / static_cast<double>(source.size());
}

}  // namespace

SolveReport solve_svd(const P2PlSystem& system, double sv_cutoff) {
    if (!system.A.allFinite() || !system.b.allFinite())
        throw NumericalFailure("solve_svd: non-finite system");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(system.A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
    const double threshold = sv_cutoff * sigma_max;

    // x = V * Sigma^+ * U^T * b with truncation of the small directions.
    Eigen::VectorXd utb = svd.matrixU().transpose() * system.b;
    int rank = 0;
    double smallest_kept = 0.0;
    for (Eigen::Index i = 0; i < sigma.size(); ++i) {
        if (sigma(i) >= threshold && sigma(i) > 0.0) {
            utb(i) /= sigma(i);
            smallest_kept = sigma(i);
            ++rank;
        } else {
            utb(i) = 0.0;
        }
    }
    const Eigen::Matrix<double, 6, 1> x = svd.matrixV() * utb;
    if (!x.allFinite()) throw NumericalFailure("solve_svd: SVD produced non-finite solution");

    SolveReport report;
    report.x = EulerPose6{x(0), x(1), x(2), x(3), x(4), x(5)};
    report.pose = euler_to_pose(report.x);
    report.rank = rank;
    report.smallest_kept_singular_value = smallest_kept;
    report.residual_before =
        mean_plane_residual(system.source, system.generated, system.normals, RigidPose::identity());
    report.residual_after =
        mean_plane_residual(system.source, system.generated, system.normals, report.pose);
    return report;
}

RigidPose solve_point_to_point(const PointCloud& refined_source,
                               const PointCloud& generated_target) {
    const std::size_t n = refined_source.size();
    if (generated_target.size() != n) throw SizeMismatch("solve_point_to_point: size mismatch");
    if (n < 3) throw TooFewPoints("solve_point_to_point: need at least 3 points");

    Eigen::Vector3d centroid_src = Eigen::Vector3d::Zero();
    Eigen::Vector3d centroid_dst = Eigen::Vector3d::Zero();
    for (std::size_t j = 0; j < n; ++j) {
        centroid_src += refined_source[j];
        centroid_dst += generated_target[j];
    }
    centroid_src /= static_cast<double>(n);
    centroid_dst /= static_cast<double>(n);

    Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
    for (std::size_t j = 0; j < n; ++j)
        h += (generated_target[j] - centroid_dst) * (refined_source[j] - centroid_src).transpose();

    Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
    if (r.determinant() < 0.0) {
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(2, 2) = -1.0;
        r = svd.matrixU() * flip * svd.matrixV().transpose();
    }
    if (!r.allFinite()) throw NumericalFailure("solve_point_to_point: SVD failed");

    RigidPose pose;
    pose.rotation = r;
    pose.translation = centroid_dst - r * centroid_src;
    return pose;
}

SolveReport solve_pair(const PointCloud& refined_source, const PointCloud& generated_target,
                       const PointCloud& target, const NormalField& target_normals,
                       double sv_cutoff, SolverVariant variant) {
    const NormalField matched = match_normals(generated_target, target, target_normals);
    const P2PlSystem system = build_system(refined_source, generated_target, matched);

    if (variant == SolverVariant::PointToPlane) return solve_svd(system, sv_cutoff);

    SolveReport report;
    report.pose = solve_point_to_point(refined_source, generated_target);
    report.x = pose_to_euler(report.pose);
    // Rank bookkeeping has no truncation counterpart here; report the full
    // 3x3 alignment as rank 6 with the cross-covariance spectrum untouched.
    report.rank = 6;
    report.smallest_kept_singular_value = 0.0;
    report.residual_before =
        mean_plane_residual(system.source, system.generated, system.normals, RigidPose::identity());
    report.residual_after =
        mean_plane_residual(system.source, system.generated, system.normals, report.pose);
    return report;
}

}  // namespace flodom
