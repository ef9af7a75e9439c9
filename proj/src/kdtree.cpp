#include "flodom/kdtree.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <utility>

#include "flodom/errors.hpp"

namespace flodom {

KdTree3::KdTree3(const PointCloud& points) : points_(points) {
    if (points_.empty()) return;
    std::vector<int> indices(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) indices[i] = static_cast<int>(i);
    nodes_.reserve(points_.size());
    root_ = build(indices, 0, static_cast<int>(points_.size()), 0);
}

int KdTree3::build(std::vector<int>& indices, int begin, int end, int depth) {
    if (begin >= end) return -1;
    const int axis = depth % 3;
    const int mid = begin + (end - begin) / 2;
    std::nth_element(indices.begin() + begin, indices.begin() + mid, indices.begin() + end,
                     [&](int a, int b) {
                         const double ca = points_[a][axis], cb = points_[b][axis];
                         return ca < cb || (ca == cb && a < b);
                     });

    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{indices[mid], axis, -1, -1});
    const int left = build(indices, begin, mid, depth + 1);
    const int right = build(indices, mid + 1, end, depth + 1);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
}

void KdTree3::search_nearest(int node, const Point3& query, Hit& best) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    const Point3& p = points_[n.point];

    const double d2 = (p - query).squaredNorm();
    if (d2 < best.dist2 || (d2 == best.dist2 && n.point < best.index)) {
        best.index = n.point;
        best.dist2 = d2;
    }

    const double delta = query[n.axis] - p[n.axis];
    const int near = delta < 0.0 ? n.left : n.right;
    const int far = delta < 0.0 ? n.right : n.left;

    search_nearest(near, query, best);
    // <= keeps equal-distance candidates reachable so the lower-index tie
    // rule holds regardless of tree shape.
    if (delta * delta <= best.dist2) search_nearest(far, query, best);
}

KdTree3::Hit KdTree3::nearest(const Point3& query) const {
    if (points_.empty()) throw EmptyCloud("KdTree3::nearest on empty tree");
    Hit best;
    best.index = -1;
    best.dist2 = std::numeric_limits<double>::infinity();
    search_nearest(root_, query, best);
    return best;
}

// Worst candidate on top: larger distance first, then larger index.
struct KdTree3::KnnState {
    Point3 query;
    int want;
    std::priority_queue<std::pair<double, int>> heap;
};

void KdTree3::search_knn(int node, KnnState& s) const {
    if (node < 0) return;
    const Node& n = nodes_[node];
    const Point3& p = points_[n.point];

    const double d2 = (p - s.query).squaredNorm();
    if (static_cast<int>(s.heap.size()) < s.want) {
        s.heap.emplace(d2, n.point);
    } else if (d2 < s.heap.top().first ||
               (d2 == s.heap.top().first && n.point < s.heap.top().second)) {
        s.heap.pop();
        s.heap.emplace(d2, n.point);
    }

    const double delta = s.query[n.axis] - p[n.axis];
    const int near = delta < 0.0 ? n.left : n.right;
    const int far = delta < 0.0 ? n.right : n.left;

    search_knn(near, s);
    if (static_cast<int>(s.heap.size()) < s.want || delta * delta <= s.heap.top().first)
        search_knn(far, s);
}

std::vector<KdTree3::Hit> KdTree3::nearest_k(const Point3& query, int k) const {
    if (points_.empty()) throw EmptyCloud("KdTree3::nearest_k on empty tree");
    if (k <= 0) throw BadCount("KdTree3::nearest_k: k must be positive");

    KnnState s{query, std::min<int>(k, static_cast<int>(points_.size())), {}};
    search_knn(root_, s);

    std::vector<Hit> hits(s.heap.size());
    for (int i = static_cast<int>(s.heap.size()) - 1; i >= 0; --i) {
        hits[i] = Hit{s.heap.top().second, s.heap.top().first};
        s.heap.pop();
    }
    return hits;
}

}  // namespace flodom
