#pragma once

#include <totcurv/geometry.hpp>

#include <cstddef>
#include <vector>

namespace totcurv {

/// Per-element total curvature. per_triangle[t] integrates k1^2 + k2^2 over
/// face t; per_vertex_density is a pointwise density (1/length^2).
struct CurvatureField {
    std::vector<double> per_triangle;
    std::vector<double> per_vertex_density;
    std::size_t degenerate_faces = 0; // faces skipped with kappa = 0
};

/// Normalized area-weighted sum of incident face normals. Vertices without
/// faces get a zero normal and are appended to `isolated` when given.
std::vector<Vec3> vertex_normals_area_weighted(const TriangleMesh& mesh,
                                               std::vector<int>* isolated = nullptr);

/// trace(N S N^T) for one triangle whose vertex normals are na, nb, nc.
/// Throws DegenerateTriangle.
double triangle_total_curvature(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& na,
                                const Vec3& nb, const Vec3& nc);

/// Gauss-map Dirichlet energy of every face. Degenerate faces contribute 0 and
/// are counted in CurvatureField::degenerate_faces. Throws SizeMismatch.
CurvatureField total_curvature_per_triangle(const TriangleMesh& mesh,
                                            const std::vector<Vec3>& normals,
                                            unsigned threads = 1);

/// density(v) = sum of kappa_T over the faces around v / their total area.
std::vector<double> per_vertex_curvature_density(const TriangleMesh& mesh,
                                                 const CurvatureField& field);

} // namespace totcurv
