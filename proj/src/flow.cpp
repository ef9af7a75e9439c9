#include "flodom/flow.hpp"

#include "flodom/errors.hpp"
#include "flodom/kdtree.hpp"

namespace flodom {

FlowField closest_point_flow(const PointCloud& refined_source, const PointCloud& target,
                             double max_distance) {
    if (refined_source.empty()) throw EmptyCloud("closest_point_flow: empty source");
    if (target.empty()) throw EmptyCloud("closest_point_flow: empty target");

    const KdTree3 tree(target);
    const double max_d2 = max_distance * max_distance;

    FlowField flow;
    flow.reserve(refined_source.size());
    for (const auto& p : refined_source) {
        const auto hit = tree.nearest(p);
        if (hit.dist2 > max_d2)
            flow.push_back(Eigen::Vector3d::Zero());
        else
            flow.push_back(target[static_cast<std::size_t>(hit.index)] - p);
    }
    return flow;
}

FlowField oracle_flow(const PointCloud& refined_source, const RigidPose& true_pose) {
    FlowField flow;
    flow.reserve(refined_source.size());
    for (const auto& p : refined_source) flow.push_back(true_pose.apply(p) - p);
    return flow;
}

FlowField ClosestPointFlowEstimator::estimate(const PointCloud& refined_source,
                                              const PointCloud& target,
                                              const RigidPose& /*refinement*/) const {
    return closest_point_flow(refined_source, target, max_distance_);
}

FlowField OracleFlowEstimator::estimate(const PointCloud& refined_source,
                                        const PointCloud& /*target*/,
                                        const RigidPose& refinement) const {
    // The refined source is refinement(original); aim whatever remains of
    // the true motion at it so generated targets stay fixed across
    // iterations.
    const RigidPose residual = compose(true_pose_, invert(refinement));
    return oracle_flow(refined_source, residual);
}

}  // namespace flodom
