#pragma once

#include <map>
#include <string>
#include <vector>

#include "flodom/geometry.hpp"

namespace flodom::kitti {

struct ScanFile {
    std::string path;
    std::size_t point_count = 0;    // records kept
    std::size_t dropped_count = 0;  // records with non-finite values
    PointCloud points;
};

/// Reads a velodyne .bin scan: little-endian float32 quadruples
/// (x, y, z, reflectance), reflectance parsed and discarded. Records with
/// non-finite values are dropped and counted. Throws MalformedFile when the
/// size is not a multiple of 16, IoError when unreadable.
ScanFile read_scan(const std::string& path);

/// Trajectory files: one pose per line as 12 reals, the row-major 3x4 [R|t].
std::vector<RigidPose> read_trajectory(const std::string& path);
std::string trajectory_to_text(const std::vector<RigidPose>& poses);
void write_trajectory(const std::vector<RigidPose>& poses, const std::string& path);

struct LengthErrors {
    double t_err = 0.0;  // percent
    double r_err = 0.0;  // deg per 100 m
    int segment_count = 0;
};

struct EvalReport {
    double t_rel = 0.0;  // percent, mean over all evaluated segments
    double r_rel = 0.0;  // deg per 100 m, same mean
    std::map<int, LengthErrors> per_length;  // keys 100, 200, ..., 800
    int segments_evaluated = 0;
    bool too_short = false;  // no segment of >= 100 m existed
};

inline constexpr int kSegmentLengths[] = {100, 200, 300, 400, 500, 600, 700, 800};
inline constexpr int kFrameStride = 10;

/// Segment-based drift metrics. For every start frame (stride 10) and
/// every length L in 100..800 m of ground-truth path distance, the relative
/// pose error between ground truth and estimate is averaged into
/// translational (%) and rotational (deg/100 m) drift.
EvalReport evaluate(const std::vector<RigidPose>& gt, const std::vector<RigidPose>& est);

/// `<root>/sequences/<id>/velodyne/*.bin`, sorted by filename.
std::vector<std::string> list_scan_files(const std::string& velodyne_dir);

}  // namespace flodom::kitti
