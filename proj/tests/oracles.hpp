#pragma once

// Independent reference implementations used only by the tests.

#include <totcurv/geometry.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using totcurv::Vec2;
using totcurv::Vec3;

inline constexpr double kPi = std::numbers::pi;

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(unsigned long long seed) : gen(seed) {}
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
    double normal() { return std::normal_distribution<double>()(gen); }
    Vec3 vec3(double lo = -1.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
    Vec2 vec2(double lo = 0.0, double hi = 1.0) { return {uniform(lo, hi), uniform(lo, hi)}; }
    Vec3 unit() { return Vec3(normal(), normal(), normal()).normalized(); }
    Eigen::Matrix3d rotation()
    {
        Eigen::Quaterniond q(normal(), normal(), normal(), normal());
        return q.normalized().toRotationMatrix();
    }
};

/// Random triangle whose area is well above the degeneracy threshold.
inline std::array<Vec3, 3> random_triangle(Rng& rng)
{
    for (;;) {
        std::array<Vec3, 3> t{rng.vec3(), rng.vec3(), rng.vec3()};
        const double area = 0.5 * (t[1] - t[0]).cross(t[2] - t[0]).norm();
        const double longest = std::max({(t[1] - t[0]).norm(), (t[2] - t[1]).norm(), (t[0] - t[2]).norm()});
        if (area > 1e-3 * longest * longest) return t;
    }
}

/// Interior angle at `apex` from the law of cosines.
inline double angle_law_of_cosines(const Vec3& apex, const Vec3& p, const Vec3& q)
{
    const long double a = (p - apex).norm();
    const long double b = (q - apex).norm();
    const long double c = (p - q).norm();
    long double cosv = (a * a + b * b - c * c) / (2 * a * b);
    cosv = std::clamp<long double>(cosv, -1.0L, 1.0L);
    return static_cast<double>(std::acos(cosv));
}

/// Cotangent edge form of the Dirichlet energy of a linear function on a triangle.
inline double edge_form_energy(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& u)
{
    const double alpha = angle_law_of_cosines(a, b, c);
    const double beta = angle_law_of_cosines(b, c, a);
    const double gamma = angle_law_of_cosines(c, a, b);
    auto cot = [](double x) { return std::cos(x) / std::sin(x); };
    return 0.5 * (cot(alpha) * (u[1] - u[2]) * (u[1] - u[2]) + cot(beta) * (u[0] - u[2]) * (u[0] - u[2]) +
                  cot(gamma) * (u[0] - u[1]) * (u[0] - u[1]));
}

/// Sum of the per-coordinate edge-form energies of the normal field.
inline double edge_form_total_curvature(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& na, const Vec3& nb,
                                        const Vec3& nc)
{
    double total = 0.0;
    for (int k = 0; k < 3; ++k) total += edge_form_energy(a, b, c, Vec3(na[k], nb[k], nc[k]));
    return total;
}

/// Area times squared gradient of the linear interpolant of u, computed from barycentric gradients.
inline double gradient_energy(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& u)
{
    const Vec3 n = (b - a).cross(c - a);
    const double twice_area = n.norm();
    const Vec3 nh = n / twice_area;
    const Vec3 ga = nh.cross(c - b) / twice_area;
    const Vec3 gb = nh.cross(a - c) / twice_area;
    const Vec3 gc = nh.cross(b - a) / twice_area;
    const Vec3 grad = u[0] * ga + u[1] * gb + u[2] * gc;
    return 0.5 * twice_area * grad.squaredNorm();
}

/// Brute-force k nearest neighbours sorted by (distance, index).
inline std::vector<std::pair<double, int>> brute_knn(const std::vector<Vec3>& pts, const Vec3& q, std::size_t k)
{
    std::vector<std::pair<double, int>> all;
    all.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) all.emplace_back((pts[i] - q).squaredNorm(), static_cast<int>(i));
    std::sort(all.begin(), all.end());
    all.resize(std::min(k, all.size()));
    for (auto& e : all) e.first = std::sqrt(e.first);
    return all;
}

/// In-circle determinant sign relative to the scale of the triangle; positive means strictly inside
/// for a counter-clockwise triangle.
inline long double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const long double adx = a.x() - d.x(), ady = a.y() - d.y();
    const long double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const long double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    return (adx * adx + ady * ady) * (bdx * cdy - cdx * bdy) - (bdx * bdx + bdy * bdy) * (adx * cdy - cdx * ady) +
           (cdx * cdx + cdy * cdy) * (adx * bdy - bdx * ady);
}

inline long double orient2d(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return static_cast<long double>(b.x() - a.x()) * (c.y() - a.y()) -
           static_cast<long double>(b.y() - a.y()) * (c.x() - a.x());
}

/// Circumcircle test: true if d is strictly inside the circumcircle of (a, b, c) by more than tol
/// relative to the circumradius.
inline bool strictly_inside_circumcircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d, double tol)
{
    const double bx = b.x() - a.x(), by = b.y() - a.y();
    const double cx = c.x() - a.x(), cy = c.y() - a.y();
    const double den = 2.0 * (bx * cy - by * cx);
    const double ux = (cy * (bx * bx + by * by) - by * (cx * cx + cy * cy)) / den;
    const double uy = (bx * (cx * cx + cy * cy) - cx * (bx * bx + by * by)) / den;
    const Vec2 center(a.x() + ux, a.y() + uy);
    const double radius = std::hypot(ux, uy);
    return (d - center).norm() < radius * (1.0 - tol);
}

/// Andrew's monotone chain convex hull area.
inline double convex_hull_area(std::vector<Vec2> p)
{
    std::sort(p.begin(), p.end(), [](const Vec2& a, const Vec2& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    std::vector<Vec2> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && orient2d(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orient2d(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    double area = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Vec2& a = h[i];
        const Vec2& b = h[(i + 1) % h.size()];
        area += a.x() * b.y() - b.x() * a.y();
    }
    return 0.5 * area;
}

inline double segment_distance(const Vec3& p, const Vec3& a, const Vec3& b)
{
    const Vec3 ab = b - a;
    const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

/// Exact point-triangle distance by plane projection plus the three edge segments.
inline double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c)
{
    const Vec3 n = (b - a).cross(c - a).normalized();
    const Vec3 q = p - n * n.dot(p - a);
    const bool inside = n.dot((b - a).cross(q - a)) >= 0 && n.dot((c - b).cross(q - b)) >= 0 &&
                        n.dot((a - c).cross(q - c)) >= 0;
    if (inside) return std::abs(n.dot(p - a));
    return std::min({segment_distance(p, a, b), segment_distance(p, b, c), segment_distance(p, c, a)});
}

/// Minimum distance over a barycentric grid of resolution m (upper bound on the true distance).
inline double grid_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, int m)
{
    double best = 1e300;
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; i + j <= m; ++j) {
            const double u = static_cast<double>(i) / m, v = static_cast<double>(j) / m;
            best = std::min(best, (p - (a + u * (b - a) + v * (c - a))).norm());
        }
    }
    return best;
}

using Param = std::function<Vec3(double, double)>;

/// Unit normal from central finite differences of a parameterization.
inline Vec3 fd_normal(const Param& x, double u, double v, double h)
{
    const Vec3 xu = (x(u + h, v) - x(u - h, v)) / (2 * h);
    const Vec3 xv = (x(u, v + h) - x(u, v - h)) / (2 * h);
    return xu.cross(xv).normalized();
}

/// k1^2 + k2^2 = trace(W^2) with W = I^{-1} II from finite-difference fundamental forms.
inline double fd_density(const Param& x, double u, double v, double h)
{
    const Vec3 p = x(u, v);
    const Vec3 xu = (x(u + h, v) - x(u - h, v)) / (2 * h);
    const Vec3 xv = (x(u, v + h) - x(u, v - h)) / (2 * h);
    const Vec3 xuu = (x(u + h, v) - 2 * p + x(u - h, v)) / (h * h);
    const Vec3 xvv = (x(u, v + h) - 2 * p + x(u, v - h)) / (h * h);
    const Vec3 xuv = (x(u + h, v + h) - x(u + h, v - h) - x(u - h, v + h) + x(u - h, v - h)) / (4 * h * h);
    const Vec3 n = xu.cross(xv).normalized();
    Eigen::Matrix2d first, second;
    first << xu.dot(xu), xu.dot(xv), xu.dot(xv), xv.dot(xv);
    second << xuu.dot(n), xuv.dot(n), xuv.dot(n), xvv.dot(n);
    const Eigen::Matrix2d w = first.inverse() * second;
    return (w * w).trace();
}

/// Midpoint-rule integral of density * |x_u x x_v| over [0, pu) x [0, pv).
inline double surface_integral(const Param& x, const std::function<double(double, double)>& f, double pu, double pv,
                               int m, double h = 1e-6)
{
    double sum = 0.0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            const double u = (i + 0.5) * pu / m, v = (j + 0.5) * pv / m;
            const Vec3 xu = (x(u + h, v) - x(u - h, v)) / (2 * h);
            const Vec3 xv = (x(u, v + h) - x(u, v - h)) / (2 * h);
            sum += f(u, v) * xu.cross(xv).norm();
        }
    }
    return sum * (pu / m) * (pv / m);
}

/// Flat n x n grid on [0,1]^2 at z = 0.
inline totcurv::TriangleMesh flat_grid(int n, double z = 0.0)
{
    totcurv::TriangleMesh m;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) m.vertices.emplace_back(double(i) / n, double(j) / n, z);
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = j * (n + 1) + i, b = a + 1, c = a + n + 2, d = a + n + 1;
            m.faces.push_back({a, b, c});
            m.faces.push_back({a, c, d});
        }
    }
    return m;
}

} // namespace oracle
