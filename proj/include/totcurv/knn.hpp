#pragma once

#include <totcurv/geometry.hpp>

#include <cstddef>
#include <vector>

namespace totcurv {

struct Neighbor {
    int index = -1;
    double distance = 0.0;
};

/// Exact k-nearest-neighbour queries over a fixed point set (kd-tree).
/// Immutable after construction, so concurrent queries are safe.
class KnnIndex {
public:
    /// Throws EmptyCloud.
    explicit KnnIndex(std::vector<Vec3> points);

    /// min(k, n) distinct neighbours sorted by (distance, index).
    std::vector<Neighbor> query(const Vec3& p, std::size_t k) const;

    std::size_t size() const { return points_.size(); }
    const std::vector<Vec3>& points() const { return points_; }

private:
    struct Node {
        int begin = 0;
        int end = 0;
        int axis = -1; // -1 for leaves
        double split = 0.0;
        int left = -1;
        int right = -1;
    };

    int build(int begin, int end);

    std::vector<Vec3> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
};

inline KnnIndex build_knn_index(const std::vector<Vec3>& points)
{
    return KnnIndex(points);
}

} // namespace totcurv
