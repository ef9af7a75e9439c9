#pragma once

#include <array>
#include <vector>

#include "flodom/geometry.hpp"

namespace flodom {

inline constexpr int kPyramidLevels = 4;

struct PyramidConfig {
    // Points kept per level, full resolution first. Must be strictly decreasing.
    std::array<int, kPyramidLevels> level_counts{8192, 2048, 512, 256};

    void validate() const;  // throws BadCount
};

struct PyramidLevel {
    int level_index = 0;
    PointCloud points;
    NormalField normals;
    // Index of each point in the level below (level_index - 1); empty at level 0.
    std::vector<int> parent_indices;
};

struct Pyramid {
    std::array<PyramidLevel, kPyramidLevels> levels;
};

/// Greedy farthest point sampling. Selection starts at index 0; every
/// subsequent pick maximizes the minimum distance to the already selected
/// set, ties resolving to the lower index. Returns m distinct indices in
/// selection order.
std::vector<int> farthest_point_sample(const PointCloud& cloud, int m);

/// Builds the 4-level pyramid: level 0 is the input, each higher level is
/// an FPS subset of the one below with normals carried over by index.
Pyramid build_pyramid(const PointCloud& cloud, const NormalField& normals,
                      const PyramidConfig& cfg);

}  // namespace flodom
