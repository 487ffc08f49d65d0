#include <totcurv/curvature.hpp>
#include <totcurv/parallel.hpp>

#include <atomic>
#include <string>

namespace totcurv {

std::vector<Vec3> vertex_normals_area_weighted(const TriangleMesh& mesh,
                                               std::vector<int>* isolated)
{
    std::vector<Vec3> normals(mesh.num_vertices(), Vec3::Zero());
    for (const Face& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        // |cross| = 2 * area, so the raw cross product is already area weighted
        const Vec3 n = (b - a).cross(c - a);
        for (int k = 0; k < 3; ++k) normals[f[k]] += n;
    }
    for (std::size_t v = 0; v < normals.size(); ++v) {
        const double len = normals[v].norm();
        if (len > 0.0) {
            normals[v] /= len;
        } else {
            normals[v].setZero();
            if (isolated) isolated->push_back(static_cast<int>(v));
        }
    }
    return normals;
}

double triangle_total_curvature(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& na,
                                const Vec3& nb, const Vec3& nc)
{
    const TriangleStiffness s = per_triangle_stiffness(a, b, c);
    Eigen::Matrix3d n;
    n.col(0) = na;
    n.col(1) = nb;
    n.col(2) = nc;
    return (n * s.s * n.transpose()).trace();
}

CurvatureField total_curvature_per_triangle(const TriangleMesh& mesh,
                                            const std::vector<Vec3>& normals, unsigned threads)
{
    if (normals.size() != mesh.num_vertices()) {
        throw Error(ErrorCode::SizeMismatch,
                    "got " + std::to_string(normals.size()) + " normals for " +
                        std::to_string(mesh.num_vertices()) + " vertices");
    }
    CurvatureField field;
    field.per_triangle.assign(mesh.num_faces(), 0.0);
    std::atomic<std::size_t> degenerate{0};
    parallel_for(mesh.num_faces(), threads, [&](std::size_t t) {
        const Face& f = mesh.faces[t];
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3& b = mesh.vertices[f[1]];
        const Vec3& c = mesh.vertices[f[2]];
        if (is_degenerate(a, b, c)) {
            degenerate.fetch_add(1, std::memory_order_relaxed);
            return;
        }
        field.per_triangle[t] =
            triangle_total_curvature(a, b, c, normals[f[0]], normals[f[1]], normals[f[2]]);
    });
    field.degenerate_faces = degenerate.load();
    return field;
}

std::vector<double> per_vertex_curvature_density(const TriangleMesh& mesh,
                                                 const CurvatureField& field)
{
    if (field.per_triangle.size() != mesh.num_faces()) {
        throw Error(ErrorCode::SizeMismatch, "curvature field does not match the face count");
    }
    std::vector<double> integral(mesh.num_vertices(), 0.0);
    std::vector<double> area(mesh.num_vertices(), 0.0);
    for (std::size_t t = 0; t < mesh.num_faces(); ++t) {
        const Face& f = mesh.faces[t];
        const double at =
            triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
        for (int k = 0; k < 3; ++k) {
            integral[f[k]] += field.per_triangle[t];
            area[f[k]] += at;
        }
    }
    std::vector<double> density(mesh.num_vertices(), 0.0);
    for (std::size_t v = 0; v < density.size(); ++v) {
        if (area[v] > 0.0) density[v] = integral[v] / area[v];
    }
    return density;
}

} // namespace totcurv
