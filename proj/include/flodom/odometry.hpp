#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "flodom/flow.hpp"
#include "flodom/geometry.hpp"
#include "flodom/preprocess.hpp"
#include "flodom/pyramid.hpp"
#include "flodom/solver.hpp"

namespace flodom {

struct OdometryConfig {
    // Refine/flow/solve repetitions per level. Forced to 1 when refinement
    // is off, since re-solving from unwarped clouds would fold the same
    // delta in twice.
    int iterations_per_level = 3;
    SolverVariant solver_variant = SolverVariant::PointToPlane;
    bool use_refinement = true;
    bool use_multilevel = true;   // off: single solve chain at level 0 only
    double sv_cutoff = 1e-6;
    double convergence_eps = 1e-6;  // early exit when an iteration's |x| drops below

    void validate() const;
};

struct LevelTrace {
    int level = 0;
    RigidPose delta_pose;   // net pose contributed by this level
    RigidPose fused_pose;   // accumulated pose after this level
    double residual = 0.0;  // point-to-plane residual of fused_pose on this level
    int iterations_used = 0;
    bool diverged = false;  // residual increased between iterations
};

struct PairResult {
    RigidPose final_pose;  // maps source-frame points into the target frame
    std::vector<LevelTrace> traces;
    double total_residual = 0.0;  // residual of final_pose at full resolution
};

/// Coarse-to-fine registration of one scan pair. Levels run 3 -> 0; each
/// level warps the source by the pose accumulated so far, estimates flow
/// toward the target, solves for the residual pose and fuses it in. When a
/// level's residual increases between iterations the best iterate is kept
/// and the trace is flagged.
PairResult register_pair(const Pyramid& source, const Pyramid& target,
                         const FlowEstimator& flow, const OdometryConfig& cfg);

/// Mean |n . (pose(s) - nn(pose(s)))| over the source, with nearest
/// neighbors and normals from the target. The registration quality metric.
double point_to_plane_residual(const PointCloud& source, const PointCloud& target,
                               const NormalField& target_normals, const RigidPose& pose);

using ScanProvider = std::function<PointCloud(std::size_t)>;
using EstimatorFactory = std::function<std::unique_ptr<FlowEstimator>(std::size_t pair_index)>;

struct PairSummary {
    std::size_t index = 0;      // pair (index, index + 1)
    RigidPose relative;         // alignment pose of the pair
    double residual = 0.0;
    double seconds = 0.0;
};

struct SequenceResult {
    std::vector<RigidPose> trajectory;  // world-from-sensor, one per scan
    std::vector<PairSummary> pairs;
};

/// Runs the pipeline over scan_count scans fetched through `scans`.
/// trajectory[0] is identity; each pair's alignment pose is inverted and
/// composed on the right to stay world-from-sensor. Pyramids are built once
/// per frame and reused as the source of the following pair. A factory of
/// nullptr uses closest-point flow for every pair.
SequenceResult run_sequence(std::size_t scan_count, const ScanProvider& scans,
                            const PreprocessConfig& cfg_pre, const PyramidConfig& cfg_pyr,
                            const OdometryConfig& cfg_odo,
                            const EstimatorFactory& estimators = nullptr);

}  // namespace flodom
