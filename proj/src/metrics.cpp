#include <totcurv/metrics.hpp>
#include <totcurv/parallel.hpp>
#include <totcurv/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace totcurv {

double rmse(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw Error(ErrorCode::SizeMismatch, "rmse inputs have " + std::to_string(a.size()) +
                                                 " and " + std::to_string(b.size()) + " values");
    }
    if (a.empty()) throw Error(ErrorCode::EmptyInput, "rmse of empty inputs");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(a.size()));
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c)
{
    const Vec3 ab = b - a;
    const Vec3 ac = c - a;
    const Vec3 ap = p - a;
    const double d1 = ab.dot(ap);
    const double d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp);
    const double d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return a + ab * (d1 / (d1 - d3));

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp);
    const double d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return a + ac * (d2 / (d2 - d6));

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
    }

    const double denom = va + vb + vc;
    if (denom == 0.0) {
        // degenerate triangle: nearest of its three edges
        auto seg = [&](const Vec3& s, const Vec3& t) {
            const Vec3 st = t - s;
            const double len2 = st.squaredNorm();
            const double u = len2 > 0.0 ? std::clamp((p - s).dot(st) / len2, 0.0, 1.0) : 0.0;
            return Vec3(s + u * st);
        };
        Vec3 best = seg(a, b);
        for (const Vec3& q : {seg(b, c), seg(c, a)}) {
            if ((q - p).squaredNorm() < (best - p).squaredNorm()) best = q;
        }
        return best;
    }
    const double v = vb / denom;
    const double w = vc / denom;
    return a + ab * v + ac * w;
}

double point_to_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c)
{
    return (closest_point_on_triangle(p, a, b, c) - p).norm();
}

TriangleBvh::TriangleBvh(const TriangleMesh& mesh) : mesh_(&mesh)
{
    if (mesh.faces.empty()) throw Error(ErrorCode::EmptyMesh, "mesh has no faces");
    const std::size_t n = mesh.num_faces();
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), 0);
    boxes_.resize(n);
    centers_.resize(n);
    for (std::size_t f = 0; f < n; ++f) {
        for (int v : mesh.faces[f]) boxes_[f].extend(mesh.vertices[v]);
        centers_[f] = boxes_[f].center();
    }
    nodes_.reserve(2 * n);
    build(0, static_cast<int>(n));
}

int TriangleBvh::build(int begin, int end)
{
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Node node;
    node.begin = begin;
    node.end = end;
    Eigen::AlignedBox3d centroid_box;
    for (int i = begin; i < end; ++i) {
        node.box.extend(boxes_[order_[i]]);
        centroid_box.extend(centers_[order_[i]]);
    }
    if (end - begin > 4) {
        int axis = 0;
        centroid_box.diagonal().maxCoeff(&axis);
        const int mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                         [&](int a, int b) { return centers_[a][axis] < centers_[b][axis]; });
        node.left = build(begin, mid);
        node.right = build(mid, end);
    }
    nodes_[id] = node;
    return id;
}

double TriangleBvh::distance(const Vec3& p) const
{
    double best2 = std::numeric_limits<double>::infinity();
    std::vector<std::pair<double, int>> stack{{nodes_[0].box.squaredExteriorDistance(p), 0}};
    while (!stack.empty()) {
        const auto [bound, id] = stack.back();
        stack.pop_back();
        if (bound >= best2) continue;
        const Node& node = nodes_[id];
        if (node.left < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const Face& f = mesh_->faces[order_[i]];
                const Vec3 q = closest_point_on_triangle(p, mesh_->vertices[f[0]],
                                                         mesh_->vertices[f[1]], mesh_->vertices[f[2]]);
                best2 = std::min(best2, (q - p).squaredNorm());
            }
            continue;
        }
        const double dl = nodes_[node.left].box.squaredExteriorDistance(p);
        const double dr = nodes_[node.right].box.squaredExteriorDistance(p);
        // nearer child on top of the stack
        if (dl < dr) {
            stack.emplace_back(dr, node.right);
            stack.emplace_back(dl, node.left);
        } else {
            stack.emplace_back(dl, node.left);
            stack.emplace_back(dr, node.right);
        }
    }
    return std::sqrt(best2);
}

namespace {

struct OneSided {
    double sum2 = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

OneSided one_sided(const TriangleMesh& from, const TriangleBvh& to, std::size_t samples,
                   std::uint64_t seed, unsigned threads)
{
    std::vector<Vec3> pts = sample_points_on_mesh(from, samples, seed).cloud.points;
    pts.insert(pts.end(), from.vertices.begin(), from.vertices.end());
    std::vector<double> dist(pts.size());
    // Distances at the rounding level of the sample coordinates count as zero.
    const double floor = 1e-13 * bounding_box_diagonal(from.vertices);
    parallel_for(pts.size(), threads, [&](std::size_t i) {
        const double d = to.distance(pts[i]);
        dist[i] = d <= floor ? 0.0 : d;
    });
    OneSided out;
    out.count = dist.size();
    for (double d : dist) {
        out.sum2 += d * d;
        out.max = std::max(out.max, d);
    }
    return out;
}

} // namespace

HausdorffResult hausdorff(const TriangleMesh& a, const TriangleMesh& b, std::size_t samples,
                          std::uint64_t seed, unsigned threads)
{
    if (a.faces.empty() || b.faces.empty()) throw Error(ErrorCode::EmptyMesh, "mesh has no faces");
    const TriangleBvh bvh_a(a);
    const TriangleBvh bvh_b(b);
    const OneSided ab = one_sided(a, bvh_b, samples, seed, threads);
    const OneSided ba = one_sided(b, bvh_a, samples, seed, threads);
    HausdorffResult out;
    out.sample_count = ab.count + ba.count;
    out.max = std::max(ab.max, ba.max);
    out.rms = std::sqrt((ab.sum2 + ba.sum2) / static_cast<double>(out.sample_count));
    return out;
}

} // namespace totcurv
