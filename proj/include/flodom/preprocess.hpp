#pragma once

#include <cstdint>
#include <vector>

#include "flodom/geometry.hpp"

namespace flodom {

struct PreprocessConfig {
    double ground_drop_fraction = 0.5;   // fraction of lowest-z points removed
    double voxel_size = 0.3;             // cell side length, meters
    int target_count = 8192;             // cloud size after count normalization
    int normal_neighbors = 16;           // k for the per-point plane fit
    int ransac_iters = 100;
    double ransac_inlier_dist = 0.15;    // meters
    std::uint64_t ransac_seed = 1;

    void validate() const;  // throws BadCount on out-of-range fields
};

struct ProcessedScan {
    PointCloud points;
    NormalField normals;
};

struct VoxelResult {
    PointCloud centroids;             // one per occupied cell, ordered by cell index
    std::vector<int> occupancy;       // points that fell into each cell, aligned with centroids
};

/// Removes the fraction of points with the smallest z (rough ground drop).
/// Relative order of the survivors is preserved; output size is
/// ceil(n * (1 - fraction)).
PointCloud drop_ground_by_z(const PointCloud& scan, double fraction);

/// RANSAC plane fit over the scan; drops the inliers of the best plane.
/// Deterministic for a fixed cfg.ransac_seed.
PointCloud remove_ground_ransac(const PointCloud& scan, const PreprocessConfig& cfg);

/// Grid downsampling: cell of p is (floor(p/D)) per axis, each occupied cell
/// is replaced by the arithmetic mean of its members. Output is ordered by
/// cell index, so it is identical (order included) under input permutation.
VoxelResult voxel_downsample(const PointCloud& scan, double voxel_size);

/// Forces the cloud to exactly target_count points. Too few: points are
/// copied cyclically starting from index 0. Too many: points are removed in
/// ascending occupancy order (ties break toward the lower index).
PointCloud normalize_count(const PointCloud& cloud, const std::vector<int>& occupancy,
                           int target_count);

/// Per-point normal from a PCA plane fit over the k nearest neighbors
/// (the point itself included). Normals are unit length and flipped toward
/// the sensor origin whenever that orientation is determined.
NormalField estimate_normals(const PointCloud& cloud, int k);

/// Full scan pipeline: z-sort ground drop, voxel downsample, count
/// normalization to cfg.target_count, normal estimation.
ProcessedScan preprocess_scan(const PointCloud& scan, const PreprocessConfig& cfg);

}  // namespace flodom
