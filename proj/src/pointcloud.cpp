#include <totcurv/curvature.hpp>
#include <totcurv/normals.hpp>
#include <totcurv/parallel.hpp>
#include <totcurv/pointcloud.hpp>

#include <algorithm>
#include <string>

namespace totcurv {

std::size_t PointCurvature::failures() const
{
    return static_cast<std::size_t>(
        std::count_if(status.begin(), status.end(), [](PointStatus s) { return s != PointStatus::Ok; }));
}

std::size_t default_k(std::size_t cloud_size)
{
    return cloud_size < 5000 ? 10 : 20;
}

namespace {

std::vector<Face> ring_for(const KnnIndex& index, const std::vector<Vec3>& normals, std::size_t i,
                           std::size_t k)
{
    const auto& points = index.points();
    const TangentFrame frame = tangent_frame(points[i], normals[i]);

    // center first, then its k nearest other points
    std::vector<int> ids{static_cast<int>(i)};
    for (const auto& nb : index.query(points[i], k + 1)) {
        if (nb.index != static_cast<int>(i) && ids.size() < k + 1) ids.push_back(nb.index);
    }
    std::vector<Vec2> planar;
    planar.reserve(ids.size());
    for (int id : ids) planar.push_back(frame.project(points[id]));

    const LocalTriangulation tri = delaunay_2d(planar, 0);
    std::vector<Face> ring = one_ring(tri);
    for (Face& f : ring) {
        for (int& v : f) v = ids[tri.source_index[v]];
    }
    return ring;
}

} // namespace

std::vector<Face> local_one_ring(const KnnIndex& index, const std::vector<Vec3>& normals,
                                 std::size_t i, std::size_t k)
{
    try {
        return ring_for(index, normals, i, k);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::IsolatedCenter) throw;
        return ring_for(index, normals, i, k + 1);
    }
}

PointCurvature pointcloud_total_curvature(const std::vector<Vec3>& points,
                                          const std::vector<Vec3>& normals, std::size_t k,
                                          unsigned threads)
{
    if (points.empty()) throw Error(ErrorCode::EmptyCloud, "no points");
    return pointcloud_total_curvature(KnnIndex(points), normals, k, threads);
}

PointCurvature pointcloud_total_curvature(const KnnIndex& index, const std::vector<Vec3>& normals,
                                          std::size_t k, unsigned threads)
{
    const auto& points = index.points();
    if (normals.size() != points.size()) {
        throw Error(ErrorCode::SizeMismatch, "got " + std::to_string(normals.size()) +
                                                 " normals for " + std::to_string(points.size()) +
                                                 " points");
    }
    PointCurvature out;
    out.density.assign(points.size(), 0.0);
    out.status.assign(points.size(), PointStatus::Ok);

    parallel_for(points.size(), threads, [&](std::size_t i) {
        std::vector<Face> ring;
        try {
            ring = local_one_ring(index, normals, i, k);
        } catch (const Error& e) {
            switch (e.code()) {
            case ErrorCode::CollinearInput: out.status[i] = PointStatus::Collinear; break;
            case ErrorCode::IsolatedCenter: out.status[i] = PointStatus::IsolatedCenter; break;
            default: out.status[i] = PointStatus::TooFewPoints; break;
            }
            return;
        }
        double energy = 0.0;
        double area = 0.0;
        for (const Face& f : ring) {
            const Vec3& a = points[f[0]];
            const Vec3& b = points[f[1]];
            const Vec3& c = points[f[2]];
            if (is_degenerate(a, b, c)) continue;
            energy += triangle_total_curvature(a, b, c, normals[f[0]], normals[f[1]], normals[f[2]]);
            area += triangle_area(a, b, c);
        }
        if (area > 0.0) {
            out.density[i] = energy / area;
        } else {
            out.status[i] = PointStatus::Degenerate;
        }
    });
    return out;
}

} // namespace totcurv
