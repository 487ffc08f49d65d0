#pragma once

#include <totcurv/geometry.hpp>
#include <totcurv/knn.hpp>

#include <cstddef>
#include <vector>

namespace totcurv {

/// Orthonormal right-handed frame {e1, e2, normal} anchored at `origin`.
struct TangentFrame {
    Vec3 origin = Vec3::Zero();
    Vec3 normal = Vec3::UnitZ();
    Vec3 e1 = Vec3::UnitX();
    Vec3 e2 = Vec3::UnitY();

    Vec2 project(const Vec3& p) const
    {
        const Vec3 d = p - origin;
        return {d.dot(e1), d.dot(e2)};
    }
};

/// e1 is the global axis least aligned with `normal` (lowest index on ties),
/// made orthogonal to it; e2 = normal x e1.
TangentFrame tangent_frame(const Vec3& origin, const Vec3& normal);

struct PcaNormals {
    std::vector<Vec3> normals;  // unit, sign arbitrary
    std::vector<int> degenerate; // points whose two smallest eigenvalues tie
};

/// Smallest-eigenvalue eigenvector of the covariance of the k nearest
/// neighbours (the query point included). Throws TooFewNeighbors when k < 3
/// or the cloud has fewer than k points.
PcaNormals estimate_normals_pca(const std::vector<Vec3>& points, std::size_t k,
                                unsigned threads = 1);
PcaNormals estimate_normals_pca(const KnnIndex& index, std::size_t k, unsigned threads = 1);

struct OrientedNormals {
    std::vector<Vec3> normals;
    std::size_t components = 0; // > 1 reports DisconnectedGraph
    std::size_t flipped = 0;
};

/// Propagates a consistent sign over a minimum spanning tree of the
/// symmetric kNN graph with edge weight 1 - |n_i . n_j|. Each connected
/// component is rooted at its highest-z point, whose normal is made to point
/// away from the component centroid.
OrientedNormals orient_normals_mst(const std::vector<Vec3>& points,
                                   const std::vector<Vec3>& normals, std::size_t k);
OrientedNormals orient_normals_mst(const KnnIndex& index, const std::vector<Vec3>& normals,
                                   std::size_t k);

} // namespace totcurv
