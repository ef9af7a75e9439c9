#include "flodom/synth.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <random>

#include "flodom/errors.hpp"

namespace flodom::synth {

namespace {

constexpr double kGroundZ = -1.6;
constexpr double kGroundExtent = 32.0;
constexpr double kWallDist = 28.0;
constexpr double kWallTop = 5.0;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t h = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ull;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebull;
    h ^= h >> 31;
    return h;
}

}  // namespace

MotionProfile profile_from_name(const std::string& name) {
    if (name == "straight") return MotionProfile::Straight;
    if (name == "turns") return MotionProfile::Turns;
    throw BadCount("unknown motion profile: " + name);
}

Scene::Scene(const SceneConfig& cfg) : cfg_(cfg) {
    std::mt19937_64 rng(mix_seed(cfg.seed, 0xb0c5));
    std::uniform_real_distribution<double> u(0.0, 1.0);

    boxes_.resize(10);
    for (auto& box : boxes_) {
        box.half = Eigen::Vector3d(0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng), 0.5 + 1.5 * u(rng));
        box.center = Eigen::Vector3d(-20.0 + 40.0 * u(rng), -20.0 + 40.0 * u(rng),
                                     kGroundZ + box.half.z());
    }
    clusters_.resize(12);
    for (auto& cl : clusters_) {
        cl.center = Eigen::Vector3d(-22.0 + 44.0 * u(rng), -22.0 + 44.0 * u(rng),
                                    -0.5 + 3.0 * u(rng));
        cl.sigma = 0.2 + 0.4 * u(rng);
    }
}

PointCloud Scene::sample_frame(const RigidPose& world_from_sensor,
                               std::uint64_t frame_index) const {
    std::mt19937_64 rng(mix_seed(cfg_.seed, frame_index));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    const RigidPose sensor_from_world = invert(world_from_sensor);
    const Eigen::Vector3d eye = world_from_sensor.translation;

    PointCloud out;
    out.reserve(static_cast<std::size_t>(cfg_.points_per_frame));

    for (int i = 0; i < cfg_.points_per_frame; ++i) {
        Eigen::Vector3d q;
        const double pick = u(rng);
        if (pick < 0.45) {
            // Ground patch around the sensor.
            q = Eigen::Vector3d(eye.x() - kGroundExtent + 2.0 * kGroundExtent * u(rng),
                                eye.y() - kGroundExtent + 2.0 * kGroundExtent * u(rng), kGroundZ);
        } else if (pick < 0.67) {
            // One of the four boundary walls.
            const int wall = static_cast<int>(4.0 * u(rng)) % 4;
            const double along = -kWallDist + 2.0 * kWallDist * u(rng);
            const double up = kGroundZ + (kWallTop - kGroundZ) * u(rng);
            switch (wall) {
                case 0: q = Eigen::Vector3d(kWallDist, along, up); break;
                case 1: q = Eigen::Vector3d(-kWallDist, along, up); break;
                case 2: q = Eigen::Vector3d(along, kWallDist, up); break;
                default: q = Eigen::Vector3d(along, -kWallDist, up); break;
            }
        } else if (pick < 0.88) {
            // A box face: one of the four sides or the top.
            const Box& box = boxes_[static_cast<std::size_t>(boxes_.size() * u(rng)) %
                                    boxes_.size()];
            const int face = static_cast<int>(5.0 * u(rng)) % 5;
            const double a = -1.0 + 2.0 * u(rng);
            const double b = -1.0 + 2.0 * u(rng);
            Eigen::Vector3d local;
            switch (face) {
                case 0: local = Eigen::Vector3d(box.half.x(), a * box.half.y(), b * box.half.z()); break;
                case 1: local = Eigen::Vector3d(-box.half.x(), a * box.half.y(), b * box.half.z()); break;
                case 2: local = Eigen::Vector3d(a * box.half.x(), box.half.y(), b * box.half.z()); break;
                case 3: local = Eigen::Vector3d(a * box.half.x(), -box.half.y(), b * box.half.z()); break;
                default: local = Eigen::Vector3d(a * box.half.x(), b * box.half.y(), box.half.z()); break;
            }
            q = box.center + local;
        } else {
            const Cluster& cl = clusters_[static_cast<std::size_t>(clusters_.size() * u(rng)) %
                                          clusters_.size()];
            q = cl.center + cl.sigma * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        }

        if (cfg_.noise_sigma > 0.0)
            q += cfg_.noise_sigma * Eigen::Vector3d(gauss(rng), gauss(rng), gauss(rng));
        out.push_back(sensor_from_world.apply(q));
    }
    return out;
}

std::vector<RigidPose> make_trajectory(MotionProfile profile, int n_frames) {
    if (n_frames < 1) throw BadCount("make_trajectory: n_frames must be >= 1");

    std::vector<RigidPose> poses;
    poses.reserve(static_cast<std::size_t>(n_frames));

    Eigen::Vector3d position = Eigen::Vector3d::Zero();
    double yaw = 0.0;
    for (int k = 0; k < n_frames; ++k) {
        RigidPose pose;
        pose.rotation = Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()).toRotationMatrix();
        pose.translation = position;
        poses.push_back(pose);

        const bool turning = profile == MotionProfile::Turns && k >= n_frames / 3 &&
                             k < 2 * n_frames / 3;
        if (turning) yaw += 0.04;
        position += Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) * Eigen::Vector3d::UnitX();
    }
    return poses;
}

RigidPose random_small_pose(std::uint64_t seed, double max_rot_rad, double max_trans) {
    std::mt19937_64 rng(mix_seed(seed, 0x9051));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    Eigen::Vector3d axis(gauss(rng), gauss(rng), gauss(rng));
    if (axis.norm() < 1e-12) axis = Eigen::Vector3d::UnitZ();
    axis.normalize();
    Eigen::Vector3d dir(gauss(rng), gauss(rng), gauss(rng));
    if (dir.norm() < 1e-12) dir = Eigen::Vector3d::UnitX();
    dir.normalize();

    RigidPose pose;
    pose.rotation = Eigen::AngleAxisd(max_rot_rad * u(rng), axis).toRotationMatrix();
    pose.translation = max_trans * u(rng) * dir;
    return pose;
}

PairInstance make_pair_instance(const SceneConfig& cfg, const RigidPose& sensor1_world) {
    const Scene scene(cfg);
    PairInstance inst;
    inst.frame0 = scene.sample_frame(RigidPose::identity(), 0);
    inst.frame1 = scene.sample_frame(sensor1_world, 1);
    inst.true_alignment = invert(sensor1_world);
    return inst;
}

}  // namespace flodom::synth
