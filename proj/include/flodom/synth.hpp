#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "flodom/geometry.hpp"

namespace flodom::synth {

enum class MotionProfile { Straight, Turns };

MotionProfile profile_from_name(const std::string& name);  // "straight" | "turns"

struct SceneConfig {
    std::uint64_t seed = 7;
    int points_per_frame = 20000;
    double noise_sigma = 0.005;  // meters, isotropic
};

/// Deterministic world model: a ground plane, boundary walls, a handful of
/// boxes and scattered point clusters, all derived from the seed. Frames
/// sample fresh surface points each time, so consecutive scans overlap
/// without sharing exact points, like a real sensor.
class Scene {
public:
    explicit Scene(const SceneConfig& cfg);

    /// One scan in the sensor frame of `world_from_sensor`. Deterministic
    /// per (seed, frame_index).
    PointCloud sample_frame(const RigidPose& world_from_sensor, std::uint64_t frame_index) const;

private:
    struct Box {
        Eigen::Vector3d center;
        Eigen::Vector3d half;
    };
    struct Cluster {
        Eigen::Vector3d center;
        double sigma;
    };

    SceneConfig cfg_;
    std::vector<Box> boxes_;
    std::vector<Cluster> clusters_;
};

/// World-from-sensor poses, one per frame, starting at identity. Straight:
/// 1 m/frame along +x. Turns: same speed with a constant yaw rate through
/// the middle third of the frames.
std::vector<RigidPose> make_trajectory(MotionProfile profile, int n_frames);

/// Uniform random pose with rotation angle <= max_rot_rad about a random
/// axis and translation length <= max_trans.
RigidPose random_small_pose(std::uint64_t seed, double max_rot_rad, double max_trans);

struct PairInstance {
    PointCloud frame0;         // sensor at world identity
    PointCloud frame1;         // sensor at sensor1_world
    RigidPose true_alignment;  // maps frame0 points into frame1 coordinates
};

/// Two overlapping frames of one scene with a known relative pose.
PairInstance make_pair_instance(const SceneConfig& cfg, const RigidPose& sensor1_world);

}  // namespace flodom::synth
