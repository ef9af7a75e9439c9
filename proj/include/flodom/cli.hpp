#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace flodom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitNumerical = 3;

struct RunOptions {
    std::string dataset_root;
    std::string sequence_id;
    std::string config_path;  // flat config or a previous run's manifest
    std::string out_path;     // trajectory file; manifest lands next to it
    std::string preset;       // optional ablation preset overlay
    bool quiet = false;
};

struct EvalOptions {
    std::string gt_path;
    std::string est_path;
    std::string report_path;  // optional machine-readable report
    bool quiet = false;
};

struct SynthOptions {
    std::uint64_t seed = 7;
    int frames = 10;
    std::string profile = "straight";
    std::string out_dir;
    int points_per_frame = 20000;
    double noise_sigma = 0.005;
    bool quiet = false;
};

struct PlotOptions {
    std::vector<std::string> traj_paths;
    std::string out_path;  // delimited series data; an .svg lands next to it
};

int cmd_run(const RunOptions& opt);
int cmd_eval(const EvalOptions& opt);
int cmd_synth(const SynthOptions& opt);
int cmd_plot(const PlotOptions& opt);

}  // namespace flodom::cli
