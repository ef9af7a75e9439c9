#include "flodom/pyramid.hpp"

#include <limits>

#include "flodom/errors.hpp"

namespace flodom {

void PyramidConfig::validate() const {
    if (level_counts.back() <= 0) throw BadCount("pyramid: level counts must be positive");
    for (int i = 0; i + 1 < kPyramidLevels; ++i)
        if (level_counts[i] <= level_counts[i + 1])
            throw BadCount("pyramid: level counts must be strictly decreasing");
}

std::vector<int> farthest_point_sample(const PointCloud& cloud, int m) {
    const int n = static_cast<int>(cloud.size());
    if (m < 1 || m > n) throw BadCount("farthest_point_sample: m out of range");

    std::vector<int> selected;
    selected.reserve(static_cast<std::size_t>(m));
    std::vector<double> min_dist2(cloud.size(), std::numeric_limits<double>::infinity());
    std::vector<char> taken(cloud.size(), 0);

    int pick = 0;
    for (int step = 0; step < m; ++step) {
        selected.push_back(pick);
        taken[static_cast<std::size_t>(pick)] = 1;
        const Point3& latest = cloud[static_cast<std::size_t>(pick)];

        int next = -1;
        double best = -1.0;
        for (int j = 0; j < n; ++j) {
            const double d2 = (cloud[static_cast<std::size_t>(j)] - latest).squaredNorm();
            if (d2 < min_dist2[static_cast<std::size_t>(j)])
                min_dist2[static_cast<std::size_t>(j)] = d2;
            // Strict > keeps the lowest index on ties; duplicates of already
            // selected points stay eligible only through the taken filter.
            if (!taken[static_cast<std::size_t>(j)] &&
                min_dist2[static_cast<std::size_t>(j)] > best) {
                best = min_dist2[static_cast<std::size_t>(j)];
                next = j;
            }
        }
        pick = next;
    }
    return selected;
}

Pyramid build_pyramid(const PointCloud& cloud, const NormalField& normals,
                      const PyramidConfig& cfg) {
    cfg.validate();
    if (static_cast<int>(cloud.size()) != cfg.level_counts[0])
        throw SizeMismatch("build_pyramid: cloud size does not match level 0 count");
    if (normals.size() != cloud.size())
        throw SizeMismatch("build_pyramid: normals not aligned with cloud");

    Pyramid pyr;
    pyr.levels[0] = PyramidLevel{0, cloud, normals, {}};

    for (int i = 1; i < kPyramidLevels; ++i) {
        const PyramidLevel& parent = pyr.levels[static_cast<std::size_t>(i - 1)];
        std::vector<int> picked = farthest_point_sample(parent.points, cfg.level_counts[i]);

        PyramidLevel level;
        level.level_index = i;
        level.points.reserve(picked.size());
        level.normals.reserve(picked.size());
        for (int idx : picked) {
            level.points.push_back(parent.points[static_cast<std::size_t>(idx)]);
            level.normals.push_back(parent.normals[static_cast<std::size_t>(idx)]);
        }
        level.parent_indices = std::move(picked);
        pyr.levels[static_cast<std::size_t>(i)] = std::move(level);
    }
    return pyr;
}

}  // namespace flodom
