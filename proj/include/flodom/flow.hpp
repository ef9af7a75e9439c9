#pragma once

#include <limits>
#include <memory>

#include "flodom/geometry.hpp"

namespace flodom {

/// Per-point displacement from each source point to its nearest target
/// point; ties resolve to the lower target index. When the nearest point is
/// farther than max_distance the flow vector is zero.
FlowField closest_point_flow(const PointCloud& refined_source, const PointCloud& target,
                             double max_distance = std::numeric_limits<double>::infinity());

/// Exact flow under a known pose: vector j = pose(p_j) - p_j.
FlowField oracle_flow(const PointCloud& refined_source, const RigidPose& true_pose);

/// Pluggable per-point flow predictor for a (refined source, target) level
/// pair. `refinement` is the pose that has already been applied to the
/// source points this call sees (identity when refinement is disabled);
/// geometric estimators ignore it, the ground-truth estimator needs it to
/// aim at fixed target positions.
class FlowEstimator {
public:
    virtual ~FlowEstimator() = default;
    virtual FlowField estimate(const PointCloud& refined_source, const PointCloud& target,
                               const RigidPose& refinement) const = 0;
};

class ClosestPointFlowEstimator final : public FlowEstimator {
public:
    explicit ClosestPointFlowEstimator(
        double max_distance = std::numeric_limits<double>::infinity())
        : max_distance_(max_distance) {}

    FlowField estimate(const PointCloud& refined_source, const PointCloud& target,
                       const RigidPose& refinement) const override;

private:
    double max_distance_;
};

/// Emits the exact residual flow toward the targets implied by a known
/// relative pose. Test and validation tool; not available on real data.
class OracleFlowEstimator final : public FlowEstimator {
public:
    explicit OracleFlowEstimator(const RigidPose& true_pose) : true_pose_(true_pose) {}

    FlowField estimate(const PointCloud& refined_source, const PointCloud& target,
                       const RigidPose& refinement) const override;

private:
    RigidPose true_pose_;
};

}  // namespace flodom
