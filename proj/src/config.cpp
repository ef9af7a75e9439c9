#include "flodom/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flodom/errors.hpp"

namespace flodom {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    if (value == "inf") return std::numeric_limits<double>::infinity();
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("config: bad number for " + key + ": '" + value + "'", 0);
    }
}

long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long v = std::stol(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("config: bad integer for " + key + ": '" + value + "'", 0);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "on") return true;
    if (value == "false" || value == "0" || value == "off") return false;
    throw ParseError("config: bad flag for " + key + ": '" + value + "'", 0);
}

}  // namespace

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void RunConfig::validate() const {
    preprocess.validate();
    pyramid.validate();
    odometry.validate();
    if (pyramid.level_counts[0] != preprocess.target_count)
        throw BadCount("config: pyramid.level_counts[0] must equal preprocess.target_count");
    if (flow_max_distance <= 0.0) throw BadCount("config: flow.max_distance must be > 0");
}

std::map<std::string, std::string> config_to_kv(const RunConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["preprocess.ground_drop_fraction"] = format_double(cfg.preprocess.ground_drop_fraction);
    kv["preprocess.voxel_size"] = format_double(cfg.preprocess.voxel_size);
    kv["preprocess.target_count"] = std::to_string(cfg.preprocess.target_count);
    kv["preprocess.normal_neighbors"] = std::to_string(cfg.preprocess.normal_neighbors);
    kv["preprocess.ransac_iters"] = std::to_string(cfg.preprocess.ransac_iters);
    kv["preprocess.ransac_inlier_dist"] = format_double(cfg.preprocess.ransac_inlier_dist);
    kv["preprocess.ransac_seed"] = std::to_string(cfg.preprocess.ransac_seed);

    std::ostringstream counts;
    for (int i = 0; i < kPyramidLevels; ++i) {
        if (i) counts << ' ';
        counts << cfg.pyramid.level_counts[static_cast<std::size_t>(i)];
    }
    kv["pyramid.level_counts"] = counts.str();

    kv["odometry.iterations_per_level"] = std::to_string(cfg.odometry.iterations_per_level);
    kv["odometry.solver_variant"] =
        cfg.odometry.solver_variant == SolverVariant::PointToPlane ? "po2pl" : "po2po";
    kv["odometry.use_refinement"] = cfg.odometry.use_refinement ? "true" : "false";
    kv["odometry.use_multilevel"] = cfg.odometry.use_multilevel ? "true" : "false";
    kv["odometry.sv_cutoff"] = format_double(cfg.odometry.sv_cutoff);
    kv["odometry.convergence_eps"] = format_double(cfg.odometry.convergence_eps);

    kv["flow.estimator"] = cfg.flow == FlowChoice::ClosestPoint ? "closest_point" : "oracle";
    kv["flow.max_distance"] = format_double(cfg.flow_max_distance);
    kv["flow.oracle_gt"] = cfg.oracle_gt;
    return kv;
}

RunConfig config_from_kv(const std::map<std::string, std::string>& kv) {
    RunConfig cfg;
    for (const auto& [key, value] : kv) {
        if (key == "preprocess.ground_drop_fraction")
            cfg.preprocess.ground_drop_fraction = parse_double(key, value);
        else if (key == "preprocess.voxel_size")
            cfg.preprocess.voxel_size = parse_double(key, value);
        else if (key == "preprocess.target_count")
            cfg.preprocess.target_count = static_cast<int>(parse_int(key, value));
        else if (key == "preprocess.normal_neighbors")
            cfg.preprocess.normal_neighbors = static_cast<int>(parse_int(key, value));
        else if (key == "preprocess.ransac_iters")
            cfg.preprocess.ransac_iters = static_cast<int>(parse_int(key, value));
        else if (key == "preprocess.ransac_inlier_dist")
            cfg.preprocess.ransac_inlier_dist = parse_double(key, value);
        else if (key == "preprocess.ransac_seed")
            cfg.preprocess.ransac_seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "pyramid.level_counts") {
            std::istringstream ss(value);
            for (int i = 0; i < kPyramidLevels; ++i)
                if (!(ss >> cfg.pyramid.level_counts[static_cast<std::size_t>(i)]))
                    throw ParseError("config: pyramid.level_counts needs 4 integers", 0);
            int extra;
            if (ss >> extra) throw ParseError("config: pyramid.level_counts needs 4 integers", 0);
        } else if (key == "odometry.iterations_per_level")
            cfg.odometry.iterations_per_level = static_cast<int>(parse_int(key, value));
        else if (key == "odometry.solver_variant") {
            if (value == "po2pl")
                cfg.odometry.solver_variant = SolverVariant::PointToPlane;
            else if (value == "po2po")
                cfg.odometry.solver_variant = SolverVariant::PointToPoint;
            else
                throw ParseError("config: solver_variant must be po2pl or po2po", 0);
        } else if (key == "odometry.use_refinement")
            cfg.odometry.use_refinement = parse_bool(key, value);
        else if (key == "odometry.use_multilevel")
            cfg.odometry.use_multilevel = parse_bool(key, value);
        else if (key == "odometry.sv_cutoff")
            cfg.odometry.sv_cutoff = parse_double(key, value);
        else if (key == "odometry.convergence_eps")
            cfg.odometry.convergence_eps = parse_double(key, value);
        else if (key == "flow.estimator") {
            if (value == "closest_point")
                cfg.flow = FlowChoice::ClosestPoint;
            else if (value == "oracle")
                cfg.flow = FlowChoice::Oracle;
            else
                throw ParseError("config: flow.estimator must be closest_point or oracle", 0);
        } else if (key == "flow.max_distance")
            cfg.flow_max_distance = parse_double(key, value);
        else if (key == "flow.oracle_gt")
            cfg.oracle_gt = value;
        else
            throw ParseError("config: unknown key '" + key + "'", 0);
    }
    cfg.validate();
    return cfg;
}

RunConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config: cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        // Run manifest: pull the embedded config snapshot back out.
        const auto manifest = nlohmann::json::parse(text, nullptr, false);
        if (manifest.is_discarded() || !manifest.contains("config"))
            throw MalformedFile("config: " + path + " is not a valid manifest");
        std::map<std::string, std::string> kv;
        for (const auto& [key, value] : manifest.at("config").items())
            kv[key] = value.get<std::string>();
        return config_from_kv(kv);
    }

    std::map<std::string, std::string> kv;
    std::istringstream lines(text);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(lines, line)) {
        ++line_number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config: expected 'key = value'", line_number);
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return config_from_kv(kv);
}

std::string config_to_text(const RunConfig& cfg) {
    std::ostringstream out;
    for (const auto& [key, value] : config_to_kv(cfg)) out << key << " = " << value << '\n';
    return out.str();
}

void apply_preset(RunConfig& cfg, const std::string& preset) {
    if (preset == "multi-refine") {
        cfg.odometry.use_multilevel = true;
        cfg.odometry.use_refinement = true;
        cfg.odometry.solver_variant = SolverVariant::PointToPlane;
    } else if (preset == "multi-no-refine") {
        cfg.odometry.use_multilevel = true;
        cfg.odometry.use_refinement = false;
        cfg.odometry.solver_variant = SolverVariant::PointToPlane;
    } else if (preset == "svd-po2pl") {
        cfg.odometry.use_multilevel = false;
        cfg.odometry.use_refinement = true;
        cfg.odometry.iterations_per_level = 1;
        cfg.odometry.solver_variant = SolverVariant::PointToPlane;
    } else if (preset == "svd-po2po") {
        cfg.odometry.use_multilevel = false;
        cfg.odometry.use_refinement = true;
        cfg.odometry.iterations_per_level = 1;
        cfg.odometry.solver_variant = SolverVariant::PointToPoint;
    } else {
        throw BadCount("unknown preset: " + preset);
    }
}

}  // namespace flodom
