#include <totcurv/normals.hpp>
#include <totcurv/parallel.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <queue>
#include <string>
#include <tuple>

namespace totcurv {

TangentFrame tangent_frame(const Vec3& origin, const Vec3& normal)
{
    TangentFrame frame;
    frame.origin = origin;
    frame.normal = normal;
    int axis = 0;
    normal.cwiseAbs().minCoeff(&axis);
    const Vec3 a = Vec3::Unit(axis);
    frame.e1 = (a - a.dot(normal) * normal).normalized();
    frame.e2 = normal.cross(frame.e1);
    return frame;
}

PcaNormals estimate_normals_pca(const std::vector<Vec3>& points, std::size_t k, unsigned threads)
{
    if (points.empty()) throw Error(ErrorCode::EmptyCloud, "no points");
    return estimate_normals_pca(KnnIndex(points), k, threads);
}

PcaNormals estimate_normals_pca(const KnnIndex& index, std::size_t k, unsigned threads)
{
    if (k < 3) {
        throw Error(ErrorCode::TooFewNeighbors, "PCA normals need k >= 3, got " + std::to_string(k));
    }
    if (index.size() < k) {
        throw Error(ErrorCode::TooFewNeighbors, "cloud has " + std::to_string(index.size()) +
                                                    " points, fewer than k = " + std::to_string(k));
    }
    const auto& points = index.points();
    PcaNormals out;
    out.normals.assign(points.size(), Vec3::UnitZ());
    std::vector<char> degenerate(points.size(), 0);

    parallel_for(points.size(), threads, [&](std::size_t i) {
        const auto nbrs = index.query(points[i], k);
        Vec3 mean = Vec3::Zero();
        for (const auto& n : nbrs) mean += points[n.index];
        mean /= static_cast<double>(nbrs.size());
        Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
        for (const auto& n : nbrs) {
            const Vec3 d = points[n.index] - mean;
            cov += d * d.transpose();
        }
        cov /= static_cast<double>(nbrs.size());
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
        const Vec3 lambda = eig.eigenvalues(); // ascending
        out.normals[i] = eig.eigenvectors().col(0).normalized();
        if (lambda[1] - lambda[0] <= 1e-12 * std::max(lambda[2], 1e-300)) degenerate[i] = 1;
    });
    for (std::size_t i = 0; i < degenerate.size(); ++i) {
        if (degenerate[i]) out.degenerate.push_back(static_cast<int>(i));
    }
    return out;
}

OrientedNormals orient_normals_mst(const std::vector<Vec3>& points,
                                   const std::vector<Vec3>& normals, std::size_t k)
{
    if (points.empty()) throw Error(ErrorCode::EmptyCloud, "no points");
    return orient_normals_mst(KnnIndex(points), normals, k);
}

OrientedNormals orient_normals_mst(const KnnIndex& index, const std::vector<Vec3>& normals,
                                   std::size_t k)
{
    const auto& points = index.points();
    const std::size_t n = points.size();
    if (normals.size() != n) {
        throw Error(ErrorCode::SizeMismatch, "normals do not match the point count");
    }

    std::vector<std::vector<int>> adj(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& nb : index.query(points[i], k + 1)) {
            if (nb.index == static_cast<int>(i)) continue;
            adj[i].push_back(nb.index);
            adj[nb.index].push_back(static_cast<int>(i));
        }
    }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }

    OrientedNormals out;
    out.normals = normals;
    std::vector<int> component(n, -1);
    std::vector<char> done(n, 0);
    using Item = std::tuple<double, int, int>; // (weight, node, parent)

    for (std::size_t seed = 0; seed < n; ++seed) {
        if (component[seed] >= 0) continue;
        const int cid = static_cast<int>(out.components++);

        std::vector<int> members{static_cast<int>(seed)};
        component[seed] = cid;
        for (std::size_t head = 0; head < members.size(); ++head) {
            for (int w : adj[members[head]]) {
                if (component[w] < 0) {
                    component[w] = cid;
                    members.push_back(w);
                }
            }
        }
        Vec3 centroid = Vec3::Zero();
        int root = members.front();
        for (int m : members) {
            centroid += points[m];
            if (points[m].z() > points[root].z() ||
                (points[m].z() == points[root].z() && m < root)) {
                root = m;
            }
        }
        centroid /= static_cast<double>(members.size());
        if (out.normals[root].dot(points[root] - centroid) < 0.0) {
            out.normals[root] = -out.normals[root];
            ++out.flipped;
        }

        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        heap.emplace(0.0, root, root);
        while (!heap.empty()) {
            const auto [w, v, parent] = heap.top();
            heap.pop();
            if (done[v]) continue;
            done[v] = 1;
            if (v != parent && out.normals[parent].dot(out.normals[v]) < 0.0) {
                out.normals[v] = -out.normals[v];
                ++out.flipped;
            }
            for (int u : adj[v]) {
                if (!done[u]) {
                    heap.emplace(1.0 - std::abs(out.normals[v].dot(out.normals[u])), u, v);
                }
            }
        }
    }
    return out;
}

} // namespace totcurv
