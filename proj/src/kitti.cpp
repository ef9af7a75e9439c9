#include "flodom/kitti.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "flodom/errors.hpp"

namespace flodom::kitti {

namespace fs = std::filesystem;

ScanFile read_scan(const std::string& path) {
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    if (!in) throw IoError("read_scan: cannot open " + path);

    const std::streamoff size = in.tellg();
    if (size % 16 != 0)
        throw MalformedFile("read_scan: " + path + " size " + std::to_string(size) +
                            " is not a multiple of 16");
    in.seekg(0);

    ScanFile scan;
    scan.path = path;
    const std::size_t records = static_cast<std::size_t>(size) / 16;
    scan.points.reserve(records);

    float buf[4];
    for (std::size_t i = 0; i < records; ++i) {
        in.read(reinterpret_cast<char*>(buf), sizeof(buf));
        if (!in) throw IoError("read_scan: short read on " + path);
        if (!std::isfinite(buf[0]) || !std::isfinite(buf[1]) || !std::isfinite(buf[2]) ||
            !std::isfinite(buf[3])) {
            ++scan.dropped_count;
            continue;
        }
        scan.points.emplace_back(static_cast<double>(buf[0]), static_cast<double>(buf[1]),
                                 static_cast<double>(buf[2]));
    }
    scan.point_count = scan.points.size();
    return scan;
}

std::vector<RigidPose> read_trajectory(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("read_trajectory: cannot open " + path);

    std::vector<RigidPose> poses;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        std::istringstream ss(line);
        std::vector<double> vals;
        double v;
        while (ss >> v) vals.push_back(v);
        if (vals.empty()) continue;  // blank line
        if (vals.size() != 12)
            throw ParseError("read_trajectory: expected 12 values, got " +
                                 std::to_string(vals.size()),
                             line_number);

        RigidPose pose;
        pose.rotation << vals[0], vals[1], vals[2],
                         vals[4], vals[5], vals[6],
                         vals[8], vals[9], vals[10];
        pose.translation << vals[3], vals[7], vals[11];
        // Ground-truth files carry print rounding; anything worse than that
        // is not a rotation.
        if (orthonormality_error(pose.rotation) > 1e-3)
            throw ParseError("read_trajectory: rotation block is not orthonormal", line_number);
        poses.push_back(pose);
    }
    return poses;
}

std::string trajectory_to_text(const std::vector<RigidPose>& poses) {
    std::string text;
    char buf[32];
    for (const auto& pose : poses) {
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 4; ++c) {
                const double v = c < 3 ? pose.rotation(r, c) : pose.translation(r);
                std::snprintf(buf, sizeof(buf), "%.12g", v);
                text += buf;
                if (!(r == 2 && c == 3)) text += ' ';
            }
        }
        text += '\n';
    }
    return text;
}

void write_trajectory(const std::vector<RigidPose>& poses, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_trajectory: cannot open " + path);
    out << trajectory_to_text(poses);
    if (!out) throw IoError("write_trajectory: write failed on " + path);
}

namespace {

// First frame whose ground-truth path distance from `first` reaches `length`.
int frame_at_length(const std::vector<double>& dist, int first, double length) {
    for (std::size_t i = static_cast<std::size_t>(first); i < dist.size(); ++i)
        if (dist[i] - dist[static_cast<std::size_t>(first)] >= length) return static_cast<int>(i);
    return -1;
}

}  // namespace

EvalReport evaluate(const std::vector<RigidPose>& gt, const std::vector<RigidPose>& est) {
    if (gt.size() != est.size())
        throw LengthMismatch("evaluate: trajectory lengths differ (" + std::to_string(gt.size()) +
                             " vs " + std::to_string(est.size()) + ")");
    if (gt.size() < 2) throw LengthMismatch("evaluate: need at least 2 poses");

    std::vector<double> dist(gt.size(), 0.0);
    for (std::size_t i = 1; i < gt.size(); ++i)
        dist[i] = dist[i - 1] + (gt[i].translation - gt[i - 1].translation).norm();

    EvalReport report;
    for (int len : kSegmentLengths) report.per_length[len] = LengthErrors{};

    double t_sum = 0.0, r_sum = 0.0;
    int total = 0;

    for (int first = 0; first < static_cast<int>(gt.size()); first += kFrameStride) {
        for (int len : kSegmentLengths) {
            const int last = frame_at_length(dist, first, static_cast<double>(len));
            if (last < 0) continue;

            const auto f = static_cast<std::size_t>(first);
            const auto g = static_cast<std::size_t>(last);
            const RigidPose delta_gt = compose(invert(gt[f]), gt[g]);
            const RigidPose delta_est = compose(invert(est[f]), est[g]);
            const RigidPose error = compose(invert(delta_gt), delta_est);

            const double t_err = error.translation.norm() / static_cast<double>(len) * 100.0;
            const double r_err =
                rotation_angle(error.rotation) / static_cast<double>(len) * (180.0 / std::numbers::pi) * 100.0;

            LengthErrors& bucket = report.per_length[len];
            bucket.t_err += t_err;
            bucket.r_err += r_err;
            bucket.segment_count += 1;
            t_sum += t_err;
            r_sum += r_err;
            ++total;
        }
    }

    for (auto& [len, bucket] : report.per_length) {
        if (bucket.segment_count > 0) {
            bucket.t_err /= bucket.segment_count;
            bucket.r_err /= bucket.segment_count;
        }
    }

    report.segments_evaluated = total;
    if (total == 0) {
        report.too_short = true;
    } else {
        report.t_rel = t_sum / total;
        report.r_rel = r_sum / total;
    }
    return report;
}

std::vector<std::string> list_scan_files(const std::string& velodyne_dir) {
    if (!fs::is_directory(velodyne_dir))
        throw IoError("list_scan_files: not a directory: " + velodyne_dir);
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(velodyne_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".bin")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace flodom::kitti
