#include "oracles.hpp"

#include <totcurv/curvature.hpp>
#include <totcurv/error.hpp>
#include <totcurv/shapes.hpp>

#include <doctest.h>

#include <numeric>

using namespace totcurv;
using oracle::kPi;

namespace {

oracle::Param param(const ParametricSurface& s)
{
    return [&s](double u, double v) { return s.position(u, v); };
}

void check_closed_manifold(const TriangleMesh& m, long euler)
{
    const auto r = topology_report(m);
    CHECK(r.closed());
    CHECK(r.manifold());
    CHECK(r.euler_characteristic == euler);
}

} // namespace

TEST_SUITE("analytic_shapes") {

TEST_CASE("icosphere counts, radius and topology")
{
    for (int s = 0; s <= 4; ++s) {
        const double radius = 1.5;
        const TriangleMesh m = icosphere(s, radius);
        const std::size_t p = std::size_t(1) << (2 * s);
        CHECK(m.num_faces() == 20 * p);
        CHECK(m.num_vertices() == 10 * p + 2);
        for (const Vec3& v : m.vertices) REQUIRE(std::abs(v.norm() - radius) < 1e-12);
        check_closed_manifold(m, 2);
        // Outward winding.
        for (const Face& f : m.faces) {
            const Vec3 n = (m.vertices[f[1]] - m.vertices[f[0]]).cross(m.vertices[f[2]] - m.vertices[f[0]]);
            REQUIRE(n.dot(m.vertices[f[0]]) > 0);
        }
    }
    CHECK(icosphere(4).num_faces() == 5120);
}

TEST_CASE("torus grid")
{
    const TriangleMesh m = torus_grid(2, 1, 9, 9);
    CHECK(m.num_vertices() == 81);
    CHECK(m.num_faces() == 162);
    CHECK((m.vertices[0] - Vec3(3, 0, 0)).norm() < 1e-15);
    REQUIRE(m.has_uv());
    for (int n : {3, 9, 18, 36}) check_closed_manifold(torus_grid(2, 1, n, n + 1), 0);
    // Outward winding against the analytic normal.
    const auto surf = ParametricSurface::torus(2, 1);
    for (const Face& f : m.faces) {
        const Vec3 n = (m.vertices[f[1]] - m.vertices[f[0]]).cross(m.vertices[f[2]] - m.vertices[f[0]]);
        const Vec2 uv = m.vertex_uv[f[0]];
        REQUIRE(n.dot(surf.normal(uv.x(), uv.y())) > 0);
    }
    try {
        torus_grid(1, 2, 9, 9);
        FAIL("expected InvalidRadii");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidRadii);
    }
    CHECK_THROWS_AS(torus_grid(2, 1, 2, 9), Error);
}

TEST_CASE("analytic density examples")
{
    const auto sphere = ParametricSurface::sphere(1.0);
    oracle::Rng rng(40);
    for (int i = 0; i < 20; ++i) CHECK(sphere.density(rng.uniform(0, 6), rng.uniform(0.1, 3)) == doctest::Approx(2.0));
    CHECK(ParametricSurface::sphere(2.0).density(0.3, 0.4) == doctest::Approx(0.5));
    const auto torus = ParametricSurface::torus(2, 1);
    CHECK(analytic_density(torus, 0.7, 0.0) == doctest::Approx(1.0 / 9.0 + 1.0).epsilon(1e-14));
    CHECK(analytic_density(torus, 0.7, kPi / 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(analytic_density(torus, 0.7, kPi) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("analytic normals and density match finite differences")
{
    std::vector<ParametricSurface> surfaces{
        ParametricSurface::sphere(1.3), ParametricSurface::torus(2, 1), ParametricSurface::torus(3, 0.5),
        ParametricSurface::tube(KnotCurve::torus_knot(2, 3), 0.25),
        ParametricSurface::tube(KnotCurve::figure_eight(), 0.25)};
    oracle::Rng rng(41);
    for (const auto& s : surfaces) {
        const Vec2 period = s.period();
        const double pu = period.x();
        const double pv = period.y() > 0 ? period.y() : kPi; // sphere polar angle
        const double h = 1e-5 * pu;
        for (int i = 0; i < 200; ++i) {
            const double u = rng.uniform(0, pu);
            const double v = period.y() > 0 ? rng.uniform(0, pv) : rng.uniform(0.2, pv - 0.2);
            const Vec3 n = s.normal(u, v);
            REQUIRE(std::abs(n.norm() - 1.0) < 1e-10);
            const Vec3 fd = oracle::fd_normal(param(s), u, v, h);
            // The sphere's (azimuth, polar) chart is left-handed.
            const double sign = s.kind() == ParametricSurface::Kind::Sphere ? -1.0 : 1.0;
            REQUIRE((n - sign * fd).norm() < 1e-6);
            const double d = s.density(u, v);
            const double fdd = oracle::fd_density(param(s), u, v, 1e-4);
            REQUIRE(std::abs(d - fdd) <= 1e-4 * d);
            const auto [k1, k2] = s.principal_curvatures(u, v);
            REQUIRE(k1 * k1 + k2 * k2 == doctest::Approx(d).epsilon(1e-12));
        }
    }
}

TEST_CASE("tube knots")
{
    const TriangleMesh fig8 = tube_knot(KnotCurve::figure_eight(), 0.25, 400, 40);
    check_closed_manifold(fig8, 0);
    const TriangleMesh t23 = tube_knot(KnotCurve::torus_knot(2, 3), 0.25, 200, 16);
    check_closed_manifold(t23, 0);

    // Outward normals.
    const auto surf = ParametricSurface::tube(KnotCurve::figure_eight(), 0.25);
    const auto n = analytic_vertex_normals(fig8, surf);
    const auto mn = vertex_normals_area_weighted(fig8);
    for (std::size_t i = 0; i < n.size(); ++i) REQUIRE(n[i].dot(mn[i]) > 0.9);

    try {
        tube_knot(KnotCurve::torus_knot(2, 3), 2.0, 200, 16);
        FAIL("expected SelfIntersectingTube");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SelfIntersectingTube);
    }
    CHECK_THROWS_AS(tube_knot(KnotCurve::torus_knot(2, 4), 0.25, 200, 16), Error);
    CHECK_THROWS_AS(tube_knot(KnotCurve::torus_knot(2, 3), 0.25, 7, 16), Error);
}

TEST_CASE("tube frame twist per step is small")
{
    for (const KnotCurve& c : {KnotCurve::figure_eight(), KnotCurve::torus_knot(2, 3)}) {
        const auto s = ParametricSurface::tube(c, 0.25);
        const int nu = 400, nv = 40;
        const double period = s.period().x();
        for (int i = 0; i < nu; ++i) {
            const auto f0 = s.tube_frame(period * i / nu);
            const auto f1 = s.tube_frame(period * (i + 1) / nu);
            // Frame: tangent, normal, normal x tangent. Rotation of the normal about the tangent.
            const Vec3 n1 = (f1[1] - f0[0] * f0[0].dot(f1[1])).normalized();
            const double twist = std::atan2(f0[1].cross(n1).dot(f0[0]), f0[1].dot(n1));
            REQUIRE(std::abs(twist) < 2 * kPi / nv);
            REQUIRE(std::abs(f0[0].dot(f0[1])) < 1e-9);
            REQUIRE((f0[1].cross(f0[0]) - f0[2]).norm() < 1e-9);
        }
    }
}

TEST_CASE("planar circle tube reproduces the torus")
{
    // torus_knot(1, 0) is the circle of radius 3 in the xy-plane.
    const double r = 0.5;
    const int nu = 24, nv = 12;
    const TriangleMesh tube = tube_knot(KnotCurve::torus_knot(1, 0), r, nu, nv);
    const TriangleMesh torus = torus_grid(3, r, nu, nv);
    REQUIRE(tube.num_vertices() == torus.num_vertices());
    double worst = 0.0;
    for (const Vec3& p : tube.vertices) {
        double best = 1e300;
        for (const Vec3& q : torus.vertices) best = std::min(best, (p - q).norm());
        worst = std::max(worst, best);
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("ground truth per triangle")
{
    const TriangleMesh sphere = icosphere(3);
    const auto gt = gt_per_triangle(sphere, ParametricSurface::sphere(1.0));
    for (std::size_t t = 0; t < sphere.num_faces(); ++t) {
        const Face& f = sphere.faces[t];
        REQUIRE(gt.per_triangle[t] ==
                doctest::Approx(2 * triangle_area(sphere.vertices[f[0]], sphere.vertices[f[1]], sphere.vertices[f[2]])));
    }

    TriangleMesh bare = sphere;
    bare.vertex_uv.clear();
    try {
        gt_per_triangle(bare, ParametricSurface::sphere(1.0));
        FAIL("expected MissingUV");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::MissingUV);
    }

    // Torus 36 x 36 total against a dense quadrature of the analytic integral.
    const auto surf = ParametricSurface::torus(2, 1);
    const TriangleMesh m = torus_grid(2, 1, 36, 36);
    const auto field = gt_per_triangle(m, surf);
    const double total = std::accumulate(field.per_triangle.begin(), field.per_triangle.end(), 0.0);
    const double dense = oracle::surface_integral(
        param(surf), [&](double u, double v) { return surf.density(u, v); }, 2 * kPi, 2 * kPi, 600);
    CHECK(std::abs(total - dense) < 0.02 * dense);
}

TEST_CASE("snap lands on the surface")
{
    const auto surf = ParametricSurface::torus(2, 1);
    const TriangleMesh m = torus_grid(2, 1, 9, 9);
    oracle::Rng rng(42);
    for (std::size_t t = 0; t < m.num_faces(); ++t) {
        double a = rng.uniform(), b = rng.uniform();
        if (a + b > 1) {
            a = 1 - a;
            b = 1 - b;
        }
        const auto sp = surf.snap(m, static_cast<int>(t), Vec3(1 - a - b, a, b));
        REQUIRE((sp.position - surf.position(sp.uv.x(), sp.uv.y())).norm() < 1e-12);
        const Vec3 p = sp.position;
        const double ring = std::hypot(p.x(), p.y()) - 2.0;
        REQUIRE(std::abs(std::hypot(ring, p.z()) - 1.0) < 1e-12);
        REQUIRE(sp.density == doctest::Approx(surf.density(sp.uv.x(), sp.uv.y())));
    }
}

} // TEST_SUITE
