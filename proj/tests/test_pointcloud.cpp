#include "oracles.hpp"

#include <totcurv/delaunay.hpp>
#include <totcurv/error.hpp>
#include <totcurv/experiments.hpp>
#include <totcurv/knn.hpp>
#include <totcurv/metrics.hpp>
#include <totcurv/normals.hpp>
#include <totcurv/pointcloud.hpp>
#include <totcurv/shapes.hpp>

#include <doctest.h>

#include <numeric>
#include <set>

using namespace totcurv;

namespace {

std::vector<Vec3> random_points(std::size_t n, unsigned long long seed)
{
    oracle::Rng rng(seed);
    std::vector<Vec3> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(rng.vec3());
    return p;
}

std::vector<Vec3> sphere_points(std::size_t n, unsigned long long seed)
{
    oracle::Rng rng(seed);
    std::vector<Vec3> p;
    for (std::size_t i = 0; i < n; ++i) p.push_back(rng.unit());
    return p;
}

/// Brute-force validation of the empty-circumcircle property and orientation.
bool delaunay_ok(const LocalTriangulation& tri)
{
    const auto& p = tri.planar_points;
    for (const Face& f : tri.triangles) {
        if (oracle::orient2d(p[f[0]], p[f[1]], p[f[2]]) <= 0) return false;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (static_cast<int>(i) == f[0] || static_cast<int>(i) == f[1] || static_cast<int>(i) == f[2]) continue;
            if (oracle::strictly_inside_circumcircle(p[f[0]], p[f[1]], p[f[2]], p[i], 1e-9)) return false;
        }
    }
    return true;
}

double triangulated_area(const LocalTriangulation& tri)
{
    double a = 0.0;
    for (const Face& f : tri.triangles) {
        a += 0.5 * static_cast<double>(oracle::orient2d(tri.planar_points[f[0]], tri.planar_points[f[1]],
                                                        tri.planar_points[f[2]]));
    }
    return a;
}

} // namespace

TEST_SUITE("pointcloud_pipeline") {

TEST_CASE("kNN equals brute force")
{
    const auto pts = random_points(1000, 20);
    const KnnIndex index(pts);
    oracle::Rng rng(21);
    for (std::size_t k : {5u, 10u, 20u}) {
        for (int q = 0; q < 1000; ++q) {
            const Vec3 p = q % 2 ? pts[q] : rng.vec3(-1.2, 1.2);
            const auto got = index.query(p, k);
            const auto want = oracle::brute_knn(pts, p, k);
            REQUIRE(got.size() == want.size());
            for (std::size_t i = 0; i < k; ++i) {
                REQUIRE(got[i].index == want[i].second);
                REQUIRE(got[i].distance == want[i].first);
            }
        }
    }
}

TEST_CASE("kNN edge cases")
{
    CHECK_THROWS_AS(KnnIndex(std::vector<Vec3>{}), Error);
    const std::vector<Vec3> pts{{0, 0, 0}, {1, 0, 0}, {1, 0, 0}, {2, 0, 0}};
    const KnnIndex index(pts);
    const auto all = index.query({0, 0, 0}, 10);
    REQUIRE(all.size() == 4);
    CHECK(all[0].index == 0);
    CHECK(all[1].index == 1);
    CHECK(all[2].index == 2);
    CHECK(all[3].index == 3);
    CHECK(index.query({0, 0, 0}, 0).empty());
}

TEST_CASE("tangent frame is orthonormal and right-handed")
{
    oracle::Rng rng(22);
    for (int i = 0; i < 10000; ++i) {
        const Vec3 n = rng.unit();
        const auto f = tangent_frame(rng.vec3(), n);
        Eigen::Matrix3d m;
        m << f.e1, f.e2, f.normal;
        REQUIRE((m.transpose() * m - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(m.determinant() == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE((f.normal - n).norm() < 1e-12);
    }
    for (const Vec3& axis : std::vector<Vec3>{Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ(), Vec3(-1, 0, 0)}) {
        const auto f = tangent_frame(Vec3::Zero(), axis);
        CHECK(f.e1.cross(f.e2).dot(axis) == doctest::Approx(1.0));
    }
}

TEST_CASE("PCA normals")
{
    // Spherical cap around the north pole.
    oracle::Rng rng(23);
    std::vector<Vec3> cap;
    while (cap.size() < 400) {
        const Vec3 p = rng.unit();
        if (p.z() > 0.9) cap.push_back(p);
    }
    cap.emplace_back(0, 0, 1);
    const auto pca = estimate_normals_pca(cap, 20);
    const Vec3 n = pca.normals.back();
    CHECK(std::acos(std::min(1.0, std::abs(n.z()))) < 5e-2);

    // Plane: every normal is +-z.
    std::vector<Vec3> plane;
    for (int i = 0; i < 200; ++i) plane.emplace_back(rng.uniform(), rng.uniform(), 0.0);
    for (const Vec3& pn : estimate_normals_pca(plane, 10).normals) CHECK(std::abs(std::abs(pn.z()) - 1.0) < 1e-12);

    try {
        estimate_normals_pca(plane, 2);
        FAIL("expected TooFewNeighbors");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewNeighbors);
    }
    CHECK_THROWS_AS(estimate_normals_pca(std::vector<Vec3>(plane.begin(), plane.begin() + 5), 10), Error);

    // Collinear neighbourhoods are flagged.
    std::vector<Vec3> line;
    for (int i = 0; i < 30; ++i) line.emplace_back(i, 0, 0);
    CHECK(estimate_normals_pca(line, 6).degenerate.size() == line.size());
}

TEST_CASE("MST orientation on a sphere points outward")
{
    const auto pts = sphere_points(20000, 24);
    const KnnIndex index(pts);
    const auto pca = estimate_normals_pca(index, 20);
    const auto oriented = orient_normals_mst(index, pca.normals, 20);
    CHECK(oriented.components == 1);
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& p : pts) centroid += p;
    centroid /= static_cast<double>(pts.size());
    std::size_t outward = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) outward += oriented.normals[i].dot(pts[i] - centroid) > 0;
    CHECK(static_cast<double>(outward) >= 0.99 * pts.size());

    // Idempotence: consistent input stays unchanged.
    const auto again = orient_normals_mst(index, oriented.normals, 20);
    CHECK(again.flipped == 0);
    for (std::size_t i = 0; i < pts.size(); ++i) REQUIRE(again.normals[i] == oriented.normals[i]);
}

TEST_CASE("MST orientation reports components")
{
    std::vector<Vec3> pts, n;
    oracle::Rng rng(25);
    for (int c = 0; c < 2; ++c) {
        for (int i = 0; i < 50; ++i) {
            pts.emplace_back(rng.uniform() + 100 * c, rng.uniform(), 0.0);
            n.emplace_back(0, 0, i % 2 ? 1.0 : -1.0);
        }
    }
    const auto o = orient_normals_mst(pts, n, 8);
    CHECK(o.components == 2);
    for (const Vec3& v : o.normals) CHECK(v.z() == doctest::Approx(o.normals[0].z()));
}

TEST_CASE("Delaunay: unit square")
{
    const std::vector<Vec2> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    const auto tri = delaunay_2d(sq);
    CHECK(tri.triangles.size() == 2);
    CHECK(delaunay_ok(tri));
    CHECK(triangulated_area(tri) == doctest::Approx(1.0));
}

TEST_CASE("Delaunay: random sets pass the brute-force oracle and cover the hull")
{
    oracle::Rng rng(26);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Vec2> pts;
        for (int i = 0; i < 50; ++i) pts.push_back(rng.vec2(-1, 1));
        const auto tri = delaunay_2d(pts, trial % 50);
        REQUIRE(delaunay_ok(tri));
        REQUIRE(triangulated_area(tri) == doctest::Approx(oracle::convex_hull_area(pts)).epsilon(1e-9));
        // Euler: every point is used.
        std::set<int> used;
        for (const Face& f : tri.triangles) used.insert(f.begin(), f.end());
        REQUIRE(used.size() == pts.size());
    }
}

TEST_CASE("Delaunay: cocircular lattice and duplicates")
{
    std::vector<Vec2> grid;
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) grid.emplace_back(i, j);
    }
    grid.emplace_back(2, 2);
    grid.emplace_back(2 + 1e-14, 2);
    const auto tri = delaunay_2d(grid, 14);
    CHECK(tri.planar_points.size() == 36);
    CHECK(tri.triangles.size() == 50);
    CHECK(delaunay_ok(tri));
    CHECK(triangulated_area(tri) == doctest::Approx(25.0));
}

TEST_CASE("Delaunay: errors and one-ring")
{
    try {
        delaunay_2d(std::vector<Vec2>{{0, 0}, {1, 1}});
        FAIL("expected TooFewPoints");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::TooFewPoints);
    }
    try {
        delaunay_2d(std::vector<Vec2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}});
        FAIL("expected CollinearInput");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CollinearInput);
    }

    std::vector<Vec2> ring{{0, 0}};
    for (int i = 0; i < 6; ++i) ring.emplace_back(std::cos(i * oracle::kPi / 3), std::sin(i * oracle::kPi / 3));
    const auto tri = delaunay_2d(ring, 0);
    const auto fan = one_ring(tri);
    CHECK(fan.size() == 6);
    for (const Face& f : fan) CHECK(std::find(f.begin(), f.end(), tri.center_index) != f.end());
}

TEST_CASE("default k")
{
    CHECK(default_k(2000) == 10);
    CHECK(default_k(4999) == 10);
    CHECK(default_k(20000) == 20);
}

TEST_CASE("planar cloud has zero density")
{
    oracle::Rng rng(27);
    std::vector<Vec3> pts, n;
    for (int i = 0; i < 500; ++i) {
        pts.emplace_back(rng.uniform(), rng.uniform(), 0.0);
        n.emplace_back(0, 0, 1);
    }
    const auto res = pointcloud_total_curvature(pts, n, 10);
    CHECK(res.failures() == 0);
    for (double d : res.density) CHECK(std::abs(d) < 1e-10);
}

TEST_CASE("sphere cloud density is 2")
{
    const auto pts = sphere_points(5000, 28);
    const auto res = pointcloud_total_curvature(pts, pts, 20);
    CHECK(res.failures() == 0);
    for (double d : res.density) REQUIRE(std::abs(d - 2.0) < 1e-9);
}

TEST_CASE("cloud density invariance under flip, rigid motion and thread count")
{
    const auto surf = ParametricSurface::torus(2, 1);
    SamplingConfig cfg;
    cfg.target_count = 3000;
    const auto s = sample_parametric(surf, 48, 48, cfg);
    const KnnIndex index(s.points);
    const auto base = pointcloud_total_curvature(index, s.normals, 10);

    std::vector<Vec3> flipped;
    for (const Vec3& v : s.normals) flipped.push_back(-v);
    const auto f = pointcloud_total_curvature(index, flipped, 10);

    oracle::Rng rng(29);
    const Eigen::Matrix3d r = rng.rotation();
    std::vector<Vec3> rp, rn;
    for (std::size_t i = 0; i < s.points.size(); ++i) {
        rp.push_back(r * s.points[i] + Vec3(1, 2, 3));
        rn.push_back(r * s.normals[i]);
    }
    const auto rig = pointcloud_total_curvature(rp, rn, 10);
    const auto threaded = pointcloud_total_curvature(index, s.normals, 10, 3);

    std::size_t same_ring = 0;
    for (std::size_t i = 0; i < base.density.size(); ++i) {
        REQUIRE(std::abs(f.density[i] - base.density[i]) < 1e-12);
        REQUIRE(threaded.density[i] == base.density[i]);
        // Rotation can reorder exact distance ties; compare where the neighbourhood is unchanged.
        same_ring += std::abs(rig.density[i] - base.density[i]) < 1e-9 * std::max(1.0, base.density[i]);
    }
    CHECK(same_ring == base.density.size());
}

TEST_CASE("local one-ring around every point contains the centre")
{
    const auto pts = sphere_points(500, 30);
    const KnnIndex index(pts);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto ring = local_one_ring(index, pts, i, 10);
        REQUIRE_FALSE(ring.empty());
        for (const Face& f : ring) REQUIRE(std::find(f.begin(), f.end(), static_cast<int>(i)) != f.end());
    }
}

} // TEST_SUITE
