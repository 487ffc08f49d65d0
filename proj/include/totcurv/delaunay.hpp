#pragma once

#include <totcurv/geometry.hpp>

#include <span>
#include <vector>

namespace totcurv {

/// Planar Delaunay triangulation of a small point set (a tangent-plane
/// neighbourhood). Triangles index planar_points and are counter-clockwise.
struct LocalTriangulation {
    std::vector<Vec2> planar_points; // input after removing duplicates
    std::vector<int> source_index;   // input index of each planar point
    std::vector<Face> triangles;
    int center_index = 0;            // planar index of the input's `center`
};

/// Bowyer-Watson insertion with ghost triangles on the hull, so the result
/// always covers the convex hull. Points closer than 1e-12 (relative to the
/// point spread) are merged, keeping the first occurrence. In-circle tests
/// use a tolerance of 1e-9 on coordinates normalized to unit spread.
/// Throws TooFewPoints or CollinearInput.
LocalTriangulation delaunay_2d(std::span<const Vec2> points, int center = 0);

/// Triangles of `tri` incident on its center. Throws IsolatedCenter.
std::vector<Face> one_ring(const LocalTriangulation& tri);

} // namespace totcurv
