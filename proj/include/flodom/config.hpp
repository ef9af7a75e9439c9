#pragma once

#include <map>
#include <string>

#include "flodom/odometry.hpp"
#include "flodom/preprocess.hpp"
#include "flodom/pyramid.hpp"

namespace flodom {

enum class FlowChoice { ClosestPoint, Oracle };

/// Everything a pipeline run depends on, minus the input/output paths.
/// Defaults are the reference operating point: drop 50% lowest points,
/// 0.3 m voxels, 8192/2048/512/256 pyramid, point-to-plane SVD solver.
struct RunConfig {
    PreprocessConfig preprocess;
    PyramidConfig pyramid;
    OdometryConfig odometry;
    FlowChoice flow = FlowChoice::ClosestPoint;
    double flow_max_distance = std::numeric_limits<double>::infinity();
    std::string oracle_gt;  // trajectory file for the oracle estimator

    void validate() const;
};

/// Flat `key = value` view of a config; the config file format and the
/// manifest both use it. Doubles are rendered shortest-round-trip, so
/// serialize/parse is lossless.
std::map<std::string, std::string> config_to_kv(const RunConfig& cfg);
RunConfig config_from_kv(const std::map<std::string, std::string>& kv);

/// Reads either the flat `key = value` format ('#' comments) or a run
/// manifest (JSON object with a "config" member).
RunConfig config_from_file(const std::string& path);

std::string config_to_text(const RunConfig& cfg);

/// Ablation presets: "svd-po2po", "svd-po2pl" (single level, one solve),
/// "multi-no-refine", "multi-refine" (the full method).
void apply_preset(RunConfig& cfg, const std::string& preset);

std::string format_double(double v);  // shortest round-trip decimal

inline constexpr const char* kVersionString = "flodom 0.1.0";

}  // namespace flodom
