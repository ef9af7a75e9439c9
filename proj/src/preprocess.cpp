#include "flodom/preprocess.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "flodom/errors.hpp"
#include "flodom/kdtree.hpp"

namespace flodom {

void PreprocessConfig::validate() const {
    if (ground_drop_fraction < 0.0 || ground_drop_fraction >= 1.0)
        throw BadCount("preprocess: ground_drop_fraction must be in [0,1)");
    if (voxel_size <= 0.0) throw BadCount("preprocess: voxel_size must be > 0");
    if (target_count <= 0) throw BadCount("preprocess: target_count must be > 0");
    if (normal_neighbors < 3) throw BadCount("preprocess: normal_neighbors must be >= 3");
    if (ransac_iters <= 0) throw BadCount("preprocess: ransac_iters must be > 0");
}

PointCloud drop_ground_by_z(const PointCloud& scan, double fraction) {
    if (scan.empty()) throw EmptyCloud("drop_ground_by_z: empty scan");
    if (fraction < 0.0 || fraction >= 1.0)
        throw BadCount("drop_ground_by_z: fraction must be in [0,1)");
    const std::size_t n = scan.size();
    const std::size_t keep =
        static_cast<std::size_t>(std::ceil(static_cast<double>(n) * (1.0 - fraction)));
    if (keep >= n) return scan;

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return scan[a].z() < scan[b].z() || (scan[a].z() == scan[b].z() && a < b);
    });

    // Keep the highest-z indices, restored to input order.
    std::vector<int> kept(order.begin() + static_cast<std::ptrdiff_t>(n - keep), order.end());
    std::sort(kept.begin(), kept.end());

    PointCloud out;
    out.reserve(keep);
    for (int idx : kept) out.push_back(scan[idx]);
    return out;
}

PointCloud remove_ground_ransac(const PointCloud& scan, const PreprocessConfig& cfg) {
    if (scan.empty()) throw EmptyCloud("remove_ground_ransac: empty scan");
    if (scan.size() < 3) throw TooFewPoints("remove_ground_ransac: need at least 3 points");

    std::mt19937_64 rng(cfg.ransac_seed);
    std::uniform_int_distribution<std::size_t> pick(0, scan.size() - 1);

    Eigen::Vector3d best_normal = Eigen::Vector3d::Zero();
    double best_offset = 0.0;
    int best_inliers = -1;

    for (int it = 0; it < cfg.ransac_iters; ++it) {
        const Point3& a = scan[pick(rng)];
        const Point3& b = scan[pick(rng)];
        const Point3& c = scan[pick(rng)];
        Eigen::Vector3d normal = (b - a).cross(c - a);
        const double norm = normal.norm();
        if (norm < 1e-12) continue;  // collinear sample
        normal /= norm;
        const double offset = normal.dot(a);

        int inliers = 0;
        for (const auto& p : scan)
            if (std::abs(normal.dot(p) - offset) <= cfg.ransac_inlier_dist) ++inliers;
        if (inliers > best_inliers) {
            best_inliers = inliers;
            best_normal = normal;
            best_offset = offset;
        }
    }
    if (best_inliers < 0)
        throw DegenerateInput("remove_ground_ransac: every sampled triple was collinear");

    PointCloud out;
    out.reserve(scan.size());
    for (const auto& p : scan)
        if (std::abs(best_normal.dot(p) - best_offset) > cfg.ransac_inlier_dist)
            out.push_back(p);
    return out;
}

namespace {

struct CellKey {
    std::int64_t x, y, z;
    bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
    std::size_t operator()(const CellKey& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.x) * 73856093ull;
        h ^= static_cast<std::uint64_t>(k.y) * 19349663ull;
        h ^= static_cast<std::uint64_t>(k.z) * 83492791ull;
        return static_cast<std::size_t>(h);
    }
};

CellKey cell_of(const Point3& p, double voxel_size) {
    return {static_cast<std::int64_t>(std::floor(p.x() / voxel_size)),
            static_cast<std::int64_t>(std::floor(p.y() / voxel_size)),
            static_cast<std::int64_t>(std::floor(p.z() / voxel_size))};
}

}  // namespace

VoxelResult voxel_downsample(const PointCloud& scan, double voxel_size) {
    if (scan.empty()) throw EmptyCloud("voxel_downsample: empty scan");
    if (voxel_size <= 0.0) throw BadCount("voxel_downsample: voxel_size must be > 0");

    struct Accum {
        Eigen::Vector3d sum = Eigen::Vector3d::Zero();
        int count = 0;
    };
    std::unordered_map<CellKey, Accum, CellKeyHash> cells;
    cells.reserve(scan.size());
    for (const auto& p : scan) {
        Accum& acc = cells[cell_of(p, voxel_size)];
        acc.sum += p;
        acc.count += 1;
    }

    std::vector<std::pair<CellKey, Accum>> ordered(cells.begin(), cells.end());
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
        return std::tie(a.first.x, a.first.y, a.first.z) <
               std::tie(b.first.x, b.first.y, b.first.z);
    });

    VoxelResult out;
    out.centroids.reserve(ordered.size());
    out.occupancy.reserve(ordered.size());
    for (const auto& [key, acc] : ordered) {
        out.centroids.push_back(acc.sum / static_cast<double>(acc.count));
        out.occupancy.push_back(acc.count);
    }
    return out;
}

PointCloud normalize_count(const PointCloud& cloud, const std::vector<int>& occupancy,
                           int target_count) {
    if (cloud.empty()) throw EmptyCloud("normalize_count: empty cloud");
    if (target_count <= 0) throw BadCount("normalize_count: target_count must be > 0");
    const int n = static_cast<int>(cloud.size());

    if (n == target_count) return cloud;

    if (n < target_count) {
        PointCloud out = cloud;
        out.reserve(static_cast<std::size_t>(target_count));
        for (int i = 0; static_cast<int>(out.size()) < target_count; i = (i + 1) % n)
            out.push_back(cloud[static_cast<std::size_t>(i)]);
        return out;
    }

    if (static_cast<int>(occupancy.size()) != n)
        throw SizeMismatch("normalize_count: occupancy not aligned with cloud");

    // Remove points from the sparsest cells first; ties prefer dropping the
    // lower index.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return occupancy[static_cast<std::size_t>(a)] < occupancy[static_cast<std::size_t>(b)] ||
               (occupancy[static_cast<std::size_t>(a)] == occupancy[static_cast<std::size_t>(b)] &&
                a < b);
    });
    std::vector<char> removed(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n - target_count; ++i) removed[static_cast<std::size_t>(order[i])] = 1;

    PointCloud out;
    out.reserve(static_cast<std::size_t>(target_count));
    for (int i = 0; i < n; ++i)
        if (!removed[static_cast<std::size_t>(i)]) out.push_back(cloud[static_cast<std::size_t>(i)]);
    return out;
}

NormalField estimate_normals(const PointCloud& cloud, int k) {
    if (cloud.empty()) throw EmptyCloud("estimate_normals: empty cloud");
    if (k < 3) throw BadCount("estimate_normals: k must be >= 3");
    if (static_cast<int>(cloud.size()) < k)
        throw TooFewPoints("estimate_normals: cloud smaller than k");

    const KdTree3 tree(cloud);
    NormalField normals(cloud.size());

    for (std::size_t j = 0; j < cloud.size(); ++j) {
        const auto hits = tree.nearest_k(cloud[j], k);

        Eigen::Vector3d mean = Eigen::Vector3d::Zero();
        for (const auto& h : hits) mean += cloud[static_cast<std::size_t>(h.index)];
        mean /= static_cast<double>(hits.size());

        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (const auto& h : hits) {
            const Eigen::Vector3d d = cloud[static_cast<std::size_t>(h.index)] - mean;
            cov += d * d.transpose();
        }
        cov /= static_cast<double>(hits.size());

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
        Eigen::Vector3d n = eig.eigenvectors().col(0);  // smallest eigenvalue
        const double nn = n.norm();
        n = nn > 0.0 ? Eigen::Vector3d(n / nn) : Eigen::Vector3d::UnitX();

        // Orient toward the sensor origin when the sign is determined.
        if (n.dot(-cloud[j]) < 0.0) n = -n;
        normals[j] = n;
    }
    return normals;
}

ProcessedScan preprocess_scan(const PointCloud& scan, const PreprocessConfig& cfg) {
    cfg.validate();
    if (scan.empty()) throw EmptyCloud("preprocess_scan: empty scan");

    const PointCloud above_ground = drop_ground_by_z(scan, cfg.ground_drop_fraction);
    const VoxelResult voxels = voxel_downsample(above_ground, cfg.voxel_size);
    ProcessedScan out;
    out.points = normalize_count(voxels.centroids, voxels.occupancy, cfg.target_count);
    out.normals = estimate_normals(out.points, cfg.normal_neighbors);
    return out;
}

}  // namespace flodom
