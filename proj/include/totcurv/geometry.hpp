#pragma once

#include <totcurv/error.hpp>

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstddef>
#include <vector>

namespace totcurv {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Face = std::array<int, 3>;

/// Indexed triangle surface. Faces are wound counter-clockwise when seen
/// from the side the normals point to.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::vector<Vec3> vertex_normals; // empty or one per vertex
    std::vector<Vec2> vertex_uv;      // empty or one per vertex

    std::size_t num_vertices() const { return vertices.size(); }
    std::size_t num_faces() const { return faces.size(); }
    bool has_normals() const { return !vertex_normals.empty(); }
    bool has_uv() const { return !vertex_uv.empty(); }

    /// Throws InvalidArgument / SizeMismatch when an invariant is broken.
    void validate() const;
};

struct PointCloud {
    std::vector<Vec3> points;
    std::vector<Vec3> normals; // empty or one unit vector per point

    std::size_t size() const { return points.size(); }
    bool has_normals() const { return !normals.empty(); }

    void validate() const;
};

/// Symmetric 3x3 cotangent stiffness matrix of one triangle. Rows and
/// columns follow the triangle's vertex order.
struct TriangleStiffness {
    Eigen::Matrix3d s = Eigen::Matrix3d::Zero();

    double operator()(int i, int j) const { return s(i, j); }
};

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);

/// Area below which a triangle with longest edge L counts as degenerate:
/// 1e-12 * L^2.
double degenerate_area_eps(const Vec3& a, const Vec3& b, const Vec3& c);
bool is_degenerate(const Vec3& a, const Vec3& b, const Vec3& c);

/// Interior angles at a, b and c (radians). Throws DegenerateTriangle.
std::array<double, 3> corner_angles(const Vec3& a, const Vec3& b, const Vec3& c);

/// Cotangent of the angle at `apex` between the edges towards p and q.
double cotangent(const Vec3& apex, const Vec3& p, const Vec3& q);

/// s(i,j) = -cot(angle opposite edge ij) / 2, s(i,i) = -sum_{j != i} s(i,j).
/// Throws DegenerateTriangle.
TriangleStiffness per_triangle_stiffness(const Vec3& a, const Vec3& b, const Vec3& c);

/// u^T S u: Dirichlet energy of the linear interpolant of u.
double dirichlet_energy(const TriangleStiffness& stiffness, const Vec3& u);

struct TopologyReport {
    std::size_t edges = 0;
    std::size_t boundary_edges = 0;
    std::size_t nonmanifold_edges = 0;    // shared by more than two faces
    std::size_t misoriented_edges = 0;    // two faces traversing the edge the same way
    std::size_t nonmanifold_vertices = 0; // link is not a single fan/cycle
    std::size_t degenerate_faces = 0;     // repeated vertex index
    long euler_characteristic = 0;

    bool closed() const { return boundary_edges == 0; }
    bool manifold() const
    {
        return nonmanifold_edges == 0 && misoriented_edges == 0 && nonmanifold_vertices == 0 &&
               degenerate_faces == 0;
    }
};

/// Combinatorial checks over the face list. Unreferenced vertices are
/// ignored for the Euler characteristic.
TopologyReport topology_report(const TriangleMesh& mesh);

double bounding_box_diagonal(const std::vector<Vec3>& points);

} // namespace totcurv
