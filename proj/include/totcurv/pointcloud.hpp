#pragma once

#include <totcurv/delaunay.hpp>
#include <totcurv/geometry.hpp>
#include <totcurv/knn.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace totcurv {

enum class PointStatus : std::uint8_t {
    Ok,
    Collinear,      // tangent-plane projection of the neighbourhood is a line
    IsolatedCenter, // center missing from the local triangulation
    TooFewPoints,
    Degenerate,     // every lifted ring triangle is degenerate
};

struct PointCurvature {
    std::vector<double> density; // per point, 1/length^2; 0 where status != Ok
    std::vector<PointStatus> status;

    std::size_t failures() const;
};

/// Default neighbourhood size: 20 for dense clouds, 10 below 5,000 points.
std::size_t default_k(std::size_t cloud_size);

/// One-ring of point `i` in cloud indices: its k nearest neighbours are
/// projected onto the tangent plane of normals[i], Delaunay triangulated, and
/// the triangles around the point are returned. Retries once with k + 1 when
/// the center drops out of the triangulation.
std::vector<Face> local_one_ring(const KnnIndex& index, const std::vector<Vec3>& normals,
                                 std::size_t i, std::size_t k);

/// Per-point total curvature density: sum of the Gauss-map Dirichlet energies
/// of the one-ring triangles lifted back to 3D, divided by their 3D area.
/// Throws SizeMismatch; per-point failures are reported in `status`.
PointCurvature pointcloud_total_curvature(const std::vector<Vec3>& points,
                                          const std::vector<Vec3>& normals, std::size_t k,
                                          unsigned threads = 1);
PointCurvature pointcloud_total_curvature(const KnnIndex& index, const std::vector<Vec3>& normals,
                                          std::size_t k, unsigned threads = 1);

} // namespace totcurv
