#include "flodom/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "flodom/config.hpp"
#include "flodom/errors.hpp"
#include "flodom/kitti.hpp"
#include "flodom/odometry.hpp"
#include "flodom/synth.hpp"

namespace flodom::cli {

namespace fs = std::filesystem;

namespace {

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const NumericalFailure*>(&e) || dynamic_cast<const GimbalLock*>(&e))
        return kExitNumerical;
    return kExitData;
}

// Full content lands under the final name only if everything succeeded.
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw IoError("cannot open " + tmp);
        out << content;
        if (!out) throw IoError("write failed on " + tmp);
    }
    fs::rename(tmp, path);
}

}  // namespace

int cmd_run(const RunOptions& opt) {
    try {
        RunConfig cfg;
        if (!opt.config_path.empty()) cfg = config_from_file(opt.config_path);
        if (!opt.preset.empty()) apply_preset(cfg, opt.preset);
        cfg.validate();

        const fs::path velodyne_dir =
            fs::path(opt.dataset_root) / "sequences" / opt.sequence_id / "velodyne";
        if (!fs::is_directory(velodyne_dir)) {
            std::cerr << "error: velodyne directory not found: " << velodyne_dir.string() << "\n";
            return kExitData;
        }
        const std::vector<std::string> scan_files = kitti::list_scan_files(velodyne_dir.string());
        if (scan_files.size() < 2) {
            std::cerr << "error: need at least 2 scans in " << velodyne_dir.string() << "\n";
            return kExitData;
        }

        EstimatorFactory factory;
        if (cfg.flow == FlowChoice::Oracle) {
            std::string gt_path = cfg.oracle_gt;
            if (gt_path.empty())
                gt_path = (fs::path(opt.dataset_root) / "poses" / (opt.sequence_id + ".txt"))
                              .string();
            const std::vector<RigidPose> gt = kitti::read_trajectory(gt_path);
            if (gt.size() != scan_files.size())
                throw LengthMismatch("oracle ground truth has " + std::to_string(gt.size()) +
                                     " poses for " + std::to_string(scan_files.size()) + " scans");
            factory = [gt](std::size_t k) -> std::unique_ptr<FlowEstimator> {
                const RigidPose alignment = compose(invert(gt[k + 1]), gt[k]);
                return std::make_unique<OracleFlowEstimator>(alignment);
            };
        } else {
            const double max_d = cfg.flow_max_distance;
            factory = [max_d](std::size_t) -> std::unique_ptr<FlowEstimator> {
                return std::make_unique<ClosestPointFlowEstimator>(max_d);
            };
        }

        const ScanProvider provider = [&scan_files](std::size_t k) {
            return kitti::read_scan(scan_files[k]).points;
        };

        const SequenceResult result = run_sequence(scan_files.size(), provider, cfg.preprocess,
                                                   cfg.pyramid, cfg.odometry, factory);

        if (!opt.quiet) {
            for (const auto& pair : result.pairs)
                std::printf("pair %4zu -> %4zu   residual %.6f m   %.3f s\n", pair.index,
                            pair.index + 1, pair.residual, pair.seconds);
            double mean = 0.0;
            for (const auto& pair : result.pairs) mean += pair.residual;
            std::printf("frames %zu   mean residual %.6f m\n", result.trajectory.size(),
                        mean / static_cast<double>(result.pairs.size()));
        }

        write_file_atomic(opt.out_path, kitti::trajectory_to_text(result.trajectory));

        nlohmann::json manifest;
        manifest["version"] = kVersionString;
        manifest["config"] = config_to_kv(cfg);
        manifest["inputs"] = {{"dataset", opt.dataset_root},
                              {"sequence", opt.sequence_id},
                              {"velodyne_dir", velodyne_dir.string()},
                              {"scan_count", scan_files.size()},
                              {"config_path", opt.config_path},
                              {"preset", opt.preset}};
        manifest["outputs"] = {{"trajectory", opt.out_path}};
        auto& pairs = manifest["pairs"] = nlohmann::json::array();
        for (const auto& pair : result.pairs)
            pairs.push_back({{"index", pair.index},
                             {"residual", pair.residual},
                             {"seconds", pair.seconds}});
        write_file_atomic(opt.out_path + ".manifest.json", manifest.dump(2) + "\n");
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_eval(const EvalOptions& opt) {
    try {
        const std::vector<RigidPose> gt = kitti::read_trajectory(opt.gt_path);
        const std::vector<RigidPose> est = kitti::read_trajectory(opt.est_path);
        const kitti::EvalReport report = kitti::evaluate(gt, est);

        if (!opt.quiet) {
            std::printf("t_rel %8.3f %%\n", report.t_rel);
            std::printf("r_rel %8.3f deg/100m\n", report.r_rel);
            std::printf("%-8s %12s %18s %10s\n", "length", "t_err(%)", "r_err(deg/100m)",
                        "segments");
            for (const auto& [len, bucket] : report.per_length)
                std::printf("%-8d %12.3f %18.3f %10d\n", len, bucket.t_err, bucket.r_err,
                            bucket.segment_count);
            if (report.too_short)
                std::printf("warning: no segment of >= 100 m, metrics not defined\n");
        }

        if (!opt.report_path.empty()) {
            std::ostringstream out;
            out << "length\tt_err_percent\tr_err_deg_per_100m\tsegments\n";
            for (const auto& [len, bucket] : report.per_length)
                out << len << '\t' << format_double(bucket.t_err) << '\t'
                    << format_double(bucket.r_err) << '\t' << bucket.segment_count << '\n';
            out << "overall\t" << format_double(report.t_rel) << '\t'
                << format_double(report.r_rel) << '\t' << report.segments_evaluated << '\n';
            write_file_atomic(opt.report_path, out.str());
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int cmd_synth(const SynthOptions& opt) {
    try {
        if (opt.frames < 2) {
            std::cerr << "error: synth needs at least 2 frames\n";
            return kExitUsage;
        }
        const synth::MotionProfile profile = synth::profile_from_name(opt.profile);

        synth::SceneConfig scene_cfg;
        scene_cfg.seed = opt.seed;
        scene_cfg.points_per_frame = opt.points_per_frame;
        scene_cfg.noise_sigma = opt.noise_sigma;
        const synth::Scene scene(scene_cfg);

        const std::vector<RigidPose> trajectory = synth::make_trajectory(profile, opt.frames);

        const fs::path root(opt.out_dir);
        const fs::path velodyne_dir = root / "sequences" / "00" / "velodyne";
        const fs::path poses_dir = root / "poses";
        fs::create_directories(velodyne_dir);
        fs::create_directories(poses_dir);

        for (int k = 0; k < opt.frames; ++k) {
            const PointCloud cloud =
                scene.sample_frame(trajectory[static_cast<std::size_t>(k)],
                                   static_cast<std::uint64_t>(k));
            char name[32];
            std::snprintf(name, sizeof(name), "%06d.bin", k);
            std::ofstream out(velodyne_dir / name, std::ios::binary);
            if (!out) throw IoError("cannot open " + (velodyne_dir / name).string());
            for (const auto& p : cloud) {
                const float record[4] = {static_cast<float>(p.x()), static_cast<float>(p.y()),
                                         static_cast<float>(p.z()), 0.0f};
                out.write(reinterpret_cast<const char*>(record), sizeof(record));
            }
        }
        kitti::write_trajectory(trajectory, (poses_dir / "00.txt").string());

        if (!opt.quiet)
            std::printf("wrote %d frames (%d points each) under %s\n", opt.frames,
                        opt.points_per_frame, opt.out_dir.c_str());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

namespace {

std::string series_label(const std::string& path) {
    return fs::path(path).stem().string();
}

std::string render_svg(const std::vector<std::pair<std::string, std::vector<RigidPose>>>& series) {
    constexpr double kSize = 720.0, kMargin = 40.0;
    const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

    double min_x = 0, max_x = 0, min_z = 0, max_z = 0;
    bool first = true;
    for (const auto& [label, poses] : series) {
        for (const auto& pose : poses) {
            const double x = pose.translation.x(), z = pose.translation.z();
            if (first) {
                min_x = max_x = x;
                min_z = max_z = z;
                first = false;
            }
            min_x = std::min(min_x, x); max_x = std::max(max_x, x);
            min_z = std::min(min_z, z); max_z = std::max(max_z, z);
        }
    }
    const double span = std::max({max_x - min_x, max_z - min_z, 1e-9});
    const double scale = (kSize - 2.0 * kMargin) / span;
    const auto map_x = [&](double x) { return kMargin + (x - min_x) * scale; };
    const auto map_z = [&](double z) { return kSize - kMargin - (z - min_z) * scale; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\""
        << kSize << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n";
    svg << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    std::size_t idx = 0;
    for (const auto& [label, poses] : series) {
        const char* color = kColors[idx % (sizeof(kColors) / sizeof(kColors[0]))];
        svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& pose : poses)
            svg << map_x(pose.translation.x()) << ',' << map_z(pose.translation.z()) << ' ';
        svg << "\"/>\n";
        svg << "  <text x=\"" << kMargin << "\" y=\"" << kMargin + 16.0 * static_cast<double>(idx)
            << "\" fill=\"" << color << "\" font-size=\"13\">" << label << "</text>\n";
        ++idx;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace

int cmd_plot(const PlotOptions& opt) {
    try {
        if (opt.traj_paths.empty()) {
            std::cerr << "error: plot needs at least one trajectory\n";
            return kExitUsage;
        }

        std::vector<std::pair<std::string, std::vector<RigidPose>>> series;
        for (const auto& path : opt.traj_paths)
            series.emplace_back(series_label(path), kitti::read_trajectory(path));

        std::ostringstream data;
        data << "series\tframe\tx\tz\n";
        for (const auto& [label, poses] : series)
            for (std::size_t k = 0; k < poses.size(); ++k)
                data << label << '\t' << k << '\t' << format_double(poses[k].translation.x())
                     << '\t' << format_double(poses[k].translation.z()) << '\n';
        write_file_atomic(opt.out_path, data.str());
        write_file_atomic(opt.out_path + ".svg", render_svg(series));
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace flodom::cli
