#include <totcurv/knn.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <utility>

namespace totcurv {

namespace {

constexpr int kLeafSize = 8;

using Candidate = std::pair<double, int>; // (squared distance, index)

} // namespace

KnnIndex::KnnIndex(std::vector<Vec3> points) : points_(std::move(points))
{
    if (points_.empty()) {
        throw Error(ErrorCode::EmptyCloud, "cannot index an empty point set");
    }
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    nodes_.reserve(2 * points_.size() / kLeafSize + 2);
    build(0, static_cast<int>(points_.size()));
}

int KnnIndex::build(int begin, int end)
{
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize) return id;

    Eigen::AlignedBox3d box;
    for (int i = begin; i < end; ++i) box.extend(points_[order_[i]]);
    int axis = 0;
    box.diagonal().maxCoeff(&axis);
    if (box.diagonal()[axis] <= 0.0) return id; // all coincident

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
    const double split = points_[order_[mid]][axis];
    const int left = build(begin, mid);
    const int right = build(mid, end);
    Node& node = nodes_[id];
    node.axis = axis;
    node.split = split;
    node.left = left;
    node.right = right;
    return id;
}

std::vector<Neighbor> KnnIndex::query(const Vec3& p, std::size_t k) const
{
    k = std::min(k, points_.size());
    std::vector<Neighbor> out;
    if (k == 0) return out;

    // max-heap on (d2, index): the top is the current worst kept candidate
    std::priority_queue<Candidate> heap;
    auto consider = [&](int idx) {
        const Candidate c{(points_[idx] - p).squaredNorm(), idx};
        if (heap.size() < k) {
            heap.push(c);
        } else if (c < heap.top()) {
            heap.pop();
            heap.push(c);
        }
    };

    std::vector<std::pair<int, double>> stack{{0, 0.0}}; // (node, lower bound d2)
    while (!stack.empty()) {
        const auto [id, bound] = stack.back();
        stack.pop_back();
        if (heap.size() == k && bound > heap.top().first) continue;
        const Node& node = nodes_[id];
        if (node.axis < 0) {
            for (int i = node.begin; i < node.end; ++i) consider(order_[i]);
            continue;
        }
        const double diff = p[node.axis] - node.split;
        const int near = diff < 0.0 ? node.left : node.right;
        const int far = diff < 0.0 ? node.right : node.left;
        // far side pushed first so the near side is explored first
        stack.emplace_back(far, std::max(bound, diff * diff));
        stack.emplace_back(near, bound);
    }

    out.resize(heap.size());
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = Neighbor{heap.top().second, std::sqrt(heap.top().first)};
        heap.pop();
    }
    return out;
}

} // namespace totcurv
