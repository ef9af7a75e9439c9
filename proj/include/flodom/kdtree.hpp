#pragma once

#include <cstdint>
#include <vector>

#include "flodom/geometry.hpp"

namespace flodom {

/// Exact 3D k-d tree over a point cloud. Queries return indices into the
/// cloud passed at construction. Ties on distance always resolve to the
/// lower index, independent of tree layout, so results match a brute-force
/// argmin exactly.
class KdTree3 {
public:
    explicit KdTree3(const PointCloud& points);

    struct Hit {
        int index = -1;
        double dist2 = 0.0;
    };

    /// Nearest neighbor; the indexed cloud must be non-empty.
    Hit nearest(const Point3& query) const;

    /// k nearest neighbors (k clamped to cloud size), sorted ascending by
    /// (distance, index). A query point that is itself in the cloud is its
    /// own first neighbor.
    std::vector<Hit> nearest_k(const Point3& query, int k) const;

    std::size_t size() const { return points_.size(); }

private:
    struct Node {
        int point = -1;       // index into points_
        int axis = 0;
        int left = -1, right = -1;
    };

    struct KnnState;

    int build(std::vector<int>& indices, int begin, int end, int depth);
    void search_nearest(int node, const Point3& query, Hit& best) const;
    void search_knn(int node, KnnState& state) const;

    PointCloud points_;
    std::vector<Node> nodes_;
    int root_ = -1;
};

}  // namespace flodom
