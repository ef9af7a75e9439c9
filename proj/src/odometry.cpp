#include "flodom/odometry.hpp"

#include <chrono>
#include <cmath>

#include "flodom/errors.hpp"
#include "flodom/kdtree.hpp"

namespace flodom {

void OdometryConfig::validate() const {
    if (iterations_per_level < 1) throw BadCount("odometry: iterations_per_level must be >= 1");
    if (sv_cutoff < 0.0) throw BadCount("odometry: sv_cutoff must be >= 0");
}

namespace {

double residual_with_tree(const PointCloud& source, const PointCloud& target,
                          const KdTree3& target_tree, const NormalField& target_normals,
                          const RigidPose& pose) {
    double sum = 0.0;
    for (const auto& s : source) {
        const Point3 moved = pose.apply(s);
        const auto hit = target_tree.nearest(moved);
        const std::size_t idx = static_cast<std::size_t>(hit.index);
        sum += std::abs(target_normals[idx].dot(moved - target[idx]));
    }
    return sum / static_cast<double>(source.size());
}

}  // namespace

double point_to_plane_residual(const PointCloud& source, const PointCloud& target,
                               const NormalField& target_normals, const RigidPose& pose) {
    if (source.empty()) throw EmptyCloud("point_to_plane_residual: empty source");
    if (target.empty()) throw EmptyCloud("point_to_plane_residual: empty target");
    if (target_normals.size() != target.size())
        throw SizeMismatch("point_to_plane_residual: normals not aligned with target");
    const KdTree3 tree(target);
    return residual_with_tree(source, target, tree, target_normals, pose);
}

PairResult register_pair(const Pyramid& source, const Pyramid& target,
                         const FlowEstimator& flow, const OdometryConfig& cfg) {
    cfg.validate();
    for (int i = 0; i < kPyramidLevels; ++i) {
        const auto li = static_cast<std::size_t>(i);
        if (source.levels[li].points.size() != target.levels[li].points.size())
            throw SizeMismatch("register_pair: pyramids built with different configs");
    }

    std::vector<int> levels;
    if (cfg.use_multilevel)
        levels = {3, 2, 1, 0};
    else
        levels = {0};

    const int iterations = cfg.use_refinement ? cfg.iterations_per_level : 1;

    PairResult result;
    RigidPose fused = RigidPose::identity();

    for (int level : levels) {
        const PyramidLevel& src = source.levels[static_cast<std::size_t>(level)];
        const PyramidLevel& tgt = target.levels[static_cast<std::size_t>(level)];
        const KdTree3 target_tree(tgt.points);

        const RigidPose level_start = fused;
        double prev_residual =
            residual_with_tree(src.points, tgt.points, target_tree, tgt.normals, fused);

        LevelTrace trace;
        trace.level = level;
        RigidPose best_pose = fused;
        double best_residual = prev_residual;

        for (int it = 0; it < iterations; ++it) {
            const RigidPose refinement = cfg.use_refinement ? fused : RigidPose::identity();
            const PointCloud refined = cfg.use_refinement
                                           ? transform_cloud(src.points, fused)
                                           : src.points;

            const FlowField flow_field = flow.estimate(refined, tgt.points, refinement);
            if (flow_field.size() != refined.size())
                throw SizeMismatch("register_pair: flow not aligned with source level");

            PointCloud generated;
            generated.reserve(refined.size());
            for (std::size_t j = 0; j < refined.size(); ++j)
                generated.push_back(refined[j] + flow_field[j]);

            const SolveReport step = solve_pair(refined, generated, tgt.points, tgt.normals,
                                                cfg.sv_cutoff, cfg.solver_variant);
            fused = compose(step.pose, fused);
            ++trace.iterations_used;

            const double residual =
                residual_with_tree(src.points, tgt.points, target_tree, tgt.normals, fused);
            if (residual > prev_residual) trace.diverged = true;
            if (residual <= best_residual) {
                best_residual = residual;
                best_pose = fused;
            }
            prev_residual = residual;

            if (step.x.norm() < cfg.convergence_eps) break;
        }

        fused = best_pose;
        trace.fused_pose = fused;
        trace.delta_pose = compose(fused, invert(level_start));
        trace.residual = best_residual;
        result.traces.push_back(trace);
    }

    result.final_pose = fused;
    // Level 0 is the full-resolution cloud; its residual is the pair metric.
    const PyramidLevel& src0 = source.levels[0];
    const PyramidLevel& tgt0 = target.levels[0];
    if (!result.traces.empty() && result.traces.back().level == 0)
        result.total_residual = result.traces.back().residual;
    else
        result.total_residual =
            point_to_plane_residual(src0.points, tgt0.points, tgt0.normals, fused);
    return result;
}

SequenceResult run_sequence(std::size_t scan_count, const ScanProvider& scans,
                            const PreprocessConfig& cfg_pre, const PyramidConfig& cfg_pyr,
                            const OdometryConfig& cfg_odo, const EstimatorFactory& estimators) {
    if (scan_count < 2) throw BadCount("run_sequence: need at least 2 scans");

    SequenceResult result;
    result.trajectory.reserve(scan_count);
    result.trajectory.push_back(RigidPose::identity());

    auto build_frame = [&](std::size_t k) {
        const ProcessedScan processed = preprocess_scan(scans(k), cfg_pre);
        return build_pyramid(processed.points, processed.normals, cfg_pyr);
    };

    Pyramid previous = build_frame(0);
    for (std::size_t k = 0; k + 1 < scan_count; ++k) {
        try {
            const auto start = std::chrono::steady_clock::now();
            Pyramid current = build_frame(k + 1);

            std::unique_ptr<FlowEstimator> owned;
            const FlowEstimator* flow;
            if (estimators) {
                owned = estimators(k);
                flow = owned.get();
            } else {
                owned = std::make_unique<ClosestPointFlowEstimator>();
                flow = owned.get();
            }

            const PairResult pair = register_pair(previous, current, *flow, cfg_odo);
            const auto stop = std::chrono::steady_clock::now();

            // pair.final_pose maps frame k into frame k+1; world-from-sensor
            // accumulates its inverse.
            result.trajectory.push_back(compose(result.trajectory.back(), invert(pair.final_pose)));
            result.pairs.push_back(PairSummary{
                k, pair.final_pose, pair.total_residual,
                std::chrono::duration<double>(stop - start).count()});

            previous = std::move(current);
        } catch (const Error& e) {
            throw Error("run_sequence: pair (" + std::to_string(k) + ", " +
                        std::to_string(k + 1) + ") failed: " + e.what());
        }
    }
    return result;
}

}  // namespace flodom
