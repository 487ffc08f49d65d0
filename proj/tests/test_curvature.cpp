#include "oracles.hpp"

#include <totcurv/curvature.hpp>
#include <totcurv/error.hpp>
#include <totcurv/metrics.hpp>
#include <totcurv/shapes.hpp>

#include <doctest.h>

using namespace totcurv;

namespace {

double max_angle(const std::vector<Vec3>& a, const std::vector<Vec3>& b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::atan2(a[i].cross(b[i]).norm(), a[i].dot(b[i])));
    }
    return worst;
}

std::vector<Vec3> unit_positions(const TriangleMesh& m)
{
    std::vector<Vec3> n;
    for (const Vec3& v : m.vertices) n.push_back(v.normalized());
    return n;
}

} // namespace

TEST_SUITE("curvature_mesh") {

TEST_CASE("area-weighted vertex normals")
{
    TriangleMesh tri;
    tri.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}};
    tri.faces = {{0, 1, 2}};
    for (const Vec3& n : vertex_normals_area_weighted(tri)) CHECK((n - Vec3(0, 0, 1)).norm() < 1e-15);

    const TriangleMesh flat = oracle::flat_grid(6);
    for (const Vec3& n : vertex_normals_area_weighted(flat)) CHECK((n - Vec3(0, 0, 1)).norm() < 1e-12);

    const TriangleMesh sphere = icosphere(4);
    CHECK(max_angle(vertex_normals_area_weighted(sphere), unit_positions(sphere)) < 1e-2);

    TriangleMesh loose = tri;
    loose.vertices.emplace_back(5, 5, 5);
    std::vector<int> isolated;
    const auto n = vertex_normals_area_weighted(loose, &isolated);
    REQUIRE(isolated.size() == 1);
    CHECK(isolated[0] == 3);
    CHECK(n[3].norm() == 0.0);
}

TEST_CASE("constant normals give zero")
{
    oracle::Rng rng(10);
    for (int i = 0; i < 100; ++i) {
        const auto t = oracle::random_triangle(rng);
        const Vec3 n = rng.unit();
        CHECK(std::abs(triangle_total_curvature(t[0], t[1], t[2], n, n, n)) < 1e-12);
    }
}

TEST_CASE("sphere identity: kappa equals twice the area")
{
    oracle::Rng rng(11);
    for (int i = 0; i < 1000; ++i) {
        const Vec3 a = rng.unit(), b = (a + 0.3 * rng.unit()).normalized(), c = (a + 0.3 * rng.unit()).normalized();
        if (is_degenerate(a, b, c)) continue;
        const double k = triangle_total_curvature(a, b, c, a, b, c);
        REQUIRE(std::abs(k - 2 * triangle_area(a, b, c)) < 1e-12);
        REQUIRE(std::abs(k - oracle::edge_form_total_curvature(a, b, c, a, b, c)) < 1e-12);
    }
    for (int s : {2, 4}) {
        const TriangleMesh m = icosphere(s);
        const auto field = total_curvature_per_triangle(m, unit_positions(m));
        std::vector<double> ref;
        for (const Face& f : m.faces) ref.push_back(2 * triangle_area(m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]));
        CHECK(rmse(field.per_triangle, ref) < 1e-12);
    }
}

TEST_CASE("radius-rho sphere matches 2 area / rho^2")
{
    const double rho = 2.5;
    const TriangleMesh m = icosphere(3, rho);
    const auto field = total_curvature_per_triangle(m, unit_positions(m));
    std::vector<double> ref;
    for (const Face& f : m.faces) {
        ref.push_back(2 * triangle_area(m.vertices[f[0]], m.vertices[f[1]], m.vertices[f[2]]) / (rho * rho));
    }
    CHECK(rmse(field.per_triangle, ref) < 1e-12);
}

TEST_CASE("trace formula equals per-coordinate Dirichlet energies")
{
    oracle::Rng rng(12);
    for (int i = 0; i < 5000; ++i) {
        const auto t = oracle::random_triangle(rng);
        const Vec3 na = rng.unit(), nb = rng.unit(), nc = rng.unit();
        const double k = triangle_total_curvature(t[0], t[1], t[2], na, nb, nc);
        const auto s = per_triangle_stiffness(t[0], t[1], t[2]);
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) sum += dirichlet_energy(s, Vec3(na[c], nb[c], nc[c]));
        REQUIRE(std::abs(k - sum) < 1e-12 * std::max(1.0, k));
        double grad = 0.0;
        for (int c = 0; c < 3; ++c) grad += oracle::gradient_energy(t[0], t[1], t[2], Vec3(na[c], nb[c], nc[c]));
        REQUIRE(std::abs(k - grad) < 1e-9 * std::max(1.0, k));
        REQUIRE(k >= -1e-12);
    }
}

TEST_CASE("size mismatch and degenerate faces")
{
    TriangleMesh m;
    m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {2, 0, 0}};
    m.faces = {{0, 1, 2}, {0, 1, 3}};
    try {
        total_curvature_per_triangle(m, {{0, 0, 1}});
        FAIL("expected SizeMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SizeMismatch);
    }
    const std::vector<Vec3> n{{0, 0, 1}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const auto field = total_curvature_per_triangle(m, n);
    CHECK(field.degenerate_faces == 1);
    CHECK(field.per_triangle[1] == 0.0);
    CHECK(field.per_triangle[0] > 0.0);
}

TEST_CASE("per-vertex density")
{
    const TriangleMesh flat = oracle::flat_grid(4);
    const auto ff = total_curvature_per_triangle(flat, vertex_normals_area_weighted(flat));
    for (double d : per_vertex_curvature_density(flat, ff)) CHECK(std::abs(d) < 1e-12);

    // Exact sphere normals; area-weighted normals leave an O(1) density error that does not refine away.
    const TriangleMesh sphere = icosphere(5);
    const auto sf = total_curvature_per_triangle(sphere, analytic_vertex_normals(sphere, ParametricSurface::sphere(1)));
    for (double d : per_vertex_curvature_density(sphere, sf)) REQUIRE(std::abs(d - 2.0) < 5e-2);

    const TriangleMesh torus = torus_grid(2, 1, 36, 36);
    const auto surf = ParametricSurface::torus(2, 1);
    const auto tf = total_curvature_per_triangle(torus, analytic_vertex_normals(torus, surf));
    const auto td = per_vertex_curvature_density(torus, tf);
    // Vertex (0, 0) sits on the outer equator.
    CHECK(td[0] == doctest::Approx(1.0 / 9.0 + 1.0).epsilon(2e-2));

    TriangleMesh loose = flat;
    loose.vertices.emplace_back(9, 9, 9);
    const auto lf = total_curvature_per_triangle(loose, vertex_normals_area_weighted(loose));
    CHECK(per_vertex_curvature_density(loose, lf).back() == 0.0);
}

TEST_CASE("invariance under flip, rigid motion and scaling")
{
    const TriangleMesh m = torus_grid(2, 1, 18, 18);
    const auto n = vertex_normals_area_weighted(m);
    const auto base = total_curvature_per_triangle(m, n).per_triangle;
    for (double k : base) REQUIRE(k >= -1e-12);

    std::vector<Vec3> flipped;
    for (const Vec3& v : n) flipped.push_back(-v);
    const auto f = total_curvature_per_triangle(m, flipped).per_triangle;

    oracle::Rng rng(13);
    const Eigen::Matrix3d r = rng.rotation();
    const Vec3 shift(3, -1, 7);
    TriangleMesh moved = m;
    std::vector<Vec3> rn;
    for (Vec3& v : moved.vertices) v = r * v + shift;
    for (const Vec3& v : n) rn.push_back(r * v);
    const auto rig = total_curvature_per_triangle(moved, rn).per_triangle;

    TriangleMesh scaled = m;
    for (Vec3& v : scaled.vertices) v *= 7.5;
    const auto sc = total_curvature_per_triangle(scaled, vertex_normals_area_weighted(scaled)).per_triangle;

    for (std::size_t t = 0; t < base.size(); ++t) {
        REQUIRE(std::abs(f[t] - base[t]) < 1e-12);
        REQUIRE(std::abs(rig[t] - base[t]) < 1e-9 * std::max(1.0, base[t]));
        REQUIRE(std::abs(sc[t] - base[t]) < 1e-9 * std::max(1e-3, base[t]));
    }
}

TEST_CASE("thread count does not change the result")
{
    const TriangleMesh m = torus_grid(2, 1, 24, 24);
    const auto n = vertex_normals_area_weighted(m);
    const auto one = total_curvature_per_triangle(m, n, 1).per_triangle;
    const auto four = total_curvature_per_triangle(m, n, 4).per_triangle;
    CHECK(one == four);
}

TEST_CASE("torus per-triangle error decreases under refinement")
{
    const auto surf = ParametricSurface::torus(2, 1);
    double prev = 1e300;
    for (int n : {9, 18, 36}) {
        const TriangleMesh m = torus_grid(2, 1, n, n);
        const auto est = total_curvature_per_triangle(m, analytic_vertex_normals(m, surf)).per_triangle;
        const double e = rmse(est, gt_per_triangle(m, surf).per_triangle);
        CHECK(e < prev);
        prev = e;
    }
}

} // TEST_SUITE
