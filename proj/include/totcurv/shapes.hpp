#pragma once

#include <totcurv/curvature.hpp>
#include <totcurv/geometry.hpp>

#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace totcurv {

/// Closed space curve t in [0, 2pi) of the form
///   ((2 + cos(a t)) cos(b t), (2 + cos(a t)) sin(b t), z_sign * sin(c t)).
struct KnotCurve {
    enum class Kind { TorusKnot, FigureEight };

    Kind kind = Kind::TorusKnot;
    int p = 2; // torus knot winding numbers
    int q = 3;

    static KnotCurve torus_knot(int p, int q) { return {Kind::TorusKnot, p, q}; }
    static KnotCurve figure_eight() { return {Kind::FigureEight, 0, 0}; }

    Vec3 position(double t) const;
    Vec3 d1(double t) const;
    Vec3 d2(double t) const;
    /// Curvature vector (c' x c'') x c' / |c'|^4.
    Vec3 curvature_vector(double t) const;
    std::string name() const;
};

/// Point on a parametric surface with its analytic attributes.
struct SurfacePoint {
    Vec2 uv;
    Vec3 position;
    Vec3 normal;
    double density = 0.0; // k1^2 + k2^2
};

/// Sphere, torus or tube around a knot, with analytic normals and principal
/// curvatures. Sphere: u azimuth, v polar angle. Torus: u around the axis,
/// v around the tube. Tube: u curve parameter, v angle around the curve.
class ParametricSurface {
public:
    enum class Kind { Sphere, Torus, Tube };

    static ParametricSurface sphere(double radius);
    /// Throws InvalidRadii unless R > r > 0.
    static ParametricSurface torus(double R, double r);
    /// Throws SelfIntersectingTube when tube_radius * max curvature >= 1.
    static ParametricSurface tube(const KnotCurve& curve, double tube_radius);

    Kind kind() const { return kind_; }
    double radius() const { return a_; }       // sphere radius, torus R, tube radius
    double minor_radius() const { return b_; } // torus r
    const KnotCurve& curve() const { return curve_; }

    Vec3 position(double u, double v) const;
    Vec3 normal(double u, double v) const;
    std::pair<double, double> principal_curvatures(double u, double v) const;
    double density(double u, double v) const;

    /// Periodic extent in (u, v); 0 marks a non-periodic parameter.
    Vec2 period() const;

    /// Projects the barycentric point of `face` onto the surface, using the
    /// mesh's vertex_uv (unwrapped across periodic seams). Throws MissingUV.
    SurfacePoint snap(const TriangleMesh& mesh, int face, const Vec3& bary) const;

    /// Tube frame at curve parameter t: (tangent, normal, binormal), with
    /// binormal = normal x tangent.
    std::array<Vec3, 3> tube_frame(double t) const;

private:
    struct TubeFrames;

    Kind kind_ = Kind::Sphere;
    double a_ = 1.0;
    double b_ = 0.0;
    KnotCurve curve_;
    std::shared_ptr<const TubeFrames> frames_;
};

/// Subdivided icosahedron: 20 * 4^s faces, vertices at distance `radius`.
/// Carries spherical uv and analytic normals.
TriangleMesh icosphere(int subdivisions, double radius = 1.0);

/// nu x nv periodic grid on the torus, each quad split along one diagonal.
/// Carries uv and analytic normals. Throws InvalidRadii / InvalidArgument.
TriangleMesh torus_grid(double R, double r, int nu, int nv);

/// Tube of radius r_tube swept along the knot with a rotation-minimizing
/// frame. Carries uv and analytic normals.
TriangleMesh tube_knot(const KnotCurve& curve, double r_tube, int nu, int nv);

/// Grid mesh of any periodic surface (torus or tube).
TriangleMesh periodic_grid(const ParametricSurface& surface, int nu, int nv);

/// Analytic normals evaluated at the mesh's vertex_uv. Throws MissingUV.
std::vector<Vec3> analytic_vertex_normals(const TriangleMesh& mesh,
                                          const ParametricSurface& surface);

inline double analytic_density(const ParametricSurface& surface, double u, double v)
{
    return surface.density(u, v);
}

/// Reference kappa_T: mean of the three vertex densities times the face
/// area. Throws MissingUV.
CurvatureField gt_per_triangle(const TriangleMesh& mesh, const ParametricSurface& surface);

} // namespace totcurv
