#include <totcurv/delaunay.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace totcurv {

namespace {

constexpr int kGhost = -1;
constexpr double kOrientEps = 1e-12;
constexpr double kCircleEps = 1e-9;
constexpr double kDuplicateEps = 1e-12;

double orient(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return (b.x() - a.x()) * (c.y() - a.y()) - (b.y() - a.y()) * (c.x() - a.x());
}

// Positive when d is inside the circumcircle of the counter-clockwise a, b, c.
double incircle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    const double adx = a.x() - d.x(), ady = a.y() - d.y();
    const double bdx = b.x() - d.x(), bdy = b.y() - d.y();
    const double cdx = c.x() - d.x(), cdy = c.y() - d.y();
    const double alift = adx * adx + ady * ady;
    const double blift = bdx * bdx + bdy * bdy;
    const double clift = cdx * cdx + cdy * cdy;
    return alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) +
           clift * (adx * bdy - bdx * ady);
}

// Strictly between a and b, for p (nearly) on the line through them.
bool on_open_segment(const Vec2& a, const Vec2& b, const Vec2& p)
{
    const Vec2 ab = b - a;
    const double t = (p - a).dot(ab) / ab.squaredNorm();
    return t > kDuplicateEps && t < 1.0 - kDuplicateEps;
}

struct Triangle {
    std::array<int, 3> v; // v[2] == kGhost for hull (ghost) triangles

    bool ghost() const { return v[2] == kGhost; }
};

class BowyerWatson {
public:
    explicit BowyerWatson(const std::vector<Vec2>& pts) : p_(pts) {}

    void start(int a, int b, int c)
    {
        if (orient(p_[a], p_[b], p_[c]) < 0.0) std::swap(b, c);
        tris_.push_back({{a, b, c}});
        tris_.push_back({{b, a, kGhost}});
        tris_.push_back({{c, b, kGhost}});
        tris_.push_back({{a, c, kGhost}});
    }

    void insert(int pi)
    {
        const Vec2& p = p_[pi];
        std::vector<char> bad(tris_.size(), 0);
        int seed = -1;
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            bad[t] = in_circle(tris_[t], p);
            if (bad[t] && seed < 0 && contains(tris_[t], p)) seed = static_cast<int>(t);
        }
        if (seed >= 0) keep_connected(bad, seed);

        std::vector<std::pair<int, int>> boundary;
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (!bad[t]) continue;
            for (int k = 0; k < 3; ++k) {
                const int a = tris_[t].v[k];
                const int b = tris_[t].v[(k + 1) % 3];
                if (!has_bad_edge(bad, b, a)) boundary.emplace_back(a, b);
            }
        }

        std::vector<Triangle> next;
        next.reserve(tris_.size() + 2);
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (!bad[t]) next.push_back(tris_[t]);
        }
        for (const auto& [a, b] : boundary) {
            // keep the ghost vertex in the last slot; cyclic rotation keeps orientation
            if (a == kGhost) {
                next.push_back({{b, pi, kGhost}});
            } else if (b == kGhost) {
                next.push_back({{pi, a, kGhost}});
            } else {
                next.push_back({{a, b, pi}});
            }
        }
        tris_.swap(next);
    }

    std::vector<Face> real_triangles() const
    {
        std::vector<Face> out;
        for (const auto& t : tris_) {
            if (!t.ghost()) out.push_back({t.v[0], t.v[1], t.v[2]});
        }
        return out;
    }

private:
    // Ghost (u, v, G) covers the open half-plane left of u -> v plus the open
    // hull edge between them.
    bool in_circle(const Triangle& t, const Vec2& p) const
    {
        if (t.ghost()) {
            const Vec2& u = p_[t.v[0]];
            const Vec2& v = p_[t.v[1]];
            const double o = orient(u, v, p);
            if (o > kOrientEps) return true;
            return std::abs(o) <= kOrientEps && on_open_segment(u, v, p);
        }
        return incircle(p_[t.v[0]], p_[t.v[1]], p_[t.v[2]], p) > kCircleEps;
    }

    bool contains(const Triangle& t, const Vec2& p) const
    {
        if (t.ghost()) return in_circle(t, p);
        for (int k = 0; k < 3; ++k) {
            if (orient(p_[t.v[k]], p_[t.v[(k + 1) % 3]], p) < -kOrientEps) return false;
        }
        return true;
    }

    bool has_edge(const Triangle& t, int a, int b) const
    {
        for (int k = 0; k < 3; ++k) {
            if (t.v[k] == a && t.v[(k + 1) % 3] == b) return true;
        }
        return false;
    }

    bool has_bad_edge(const std::vector<char>& bad, int a, int b) const
    {
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            if (bad[t] && has_edge(tris_[t], a, b)) return true;
        }
        return false;
    }

    // Restrict the cavity to the edge-connected component around the seed so
    // tolerance noise far away cannot punch holes into the triangulation.
    void keep_connected(std::vector<char>& bad, int seed) const
    {
        std::vector<char> keep(bad.size(), 0);
        std::vector<int> stack{seed};
        keep[seed] = 1;
        while (!stack.empty()) {
            const Triangle& t = tris_[stack.back()];
            stack.pop_back();
            for (int k = 0; k < 3; ++k) {
                const int a = t.v[k];
                const int b = t.v[(k + 1) % 3];
                for (std::size_t u = 0; u < tris_.size(); ++u) {
                    if (bad[u] && !keep[u] && has_edge(tris_[u], b, a)) {
                        keep[u] = 1;
                        stack.push_back(static_cast<int>(u));
                    }
                }
            }
        }
        bad.swap(keep);
    }

    const std::vector<Vec2>& p_;
    std::vector<Triangle> tris_;
};

} // namespace

LocalTriangulation delaunay_2d(std::span<const Vec2> points, int center)
{
    if (points.size() < 3) {
        throw Error(ErrorCode::TooFewPoints,
                    "triangulation needs 3 points, got " + std::to_string(points.size()));
    }
    if (center < 0 || static_cast<std::size_t>(center) >= points.size()) {
        throw Error(ErrorCode::InvalidArgument, "center index out of range");
    }

    Eigen::AlignedBox2d box;
    for (const Vec2& p : points) box.extend(p);
    const Vec2 mid = box.center();
    const double spread = box.diagonal().maxCoeff();
    const double scale = spread > 0.0 ? 1.0 / spread : 1.0;

    // The center goes first so it survives deduplication.
    std::vector<int> order;
    order.reserve(points.size());
    order.push_back(center);
    for (int i = 0; i < static_cast<int>(points.size()); ++i) {
        if (i != center) order.push_back(i);
    }

    LocalTriangulation out;
    std::vector<Vec2> normalized;
    for (int i : order) {
        const Vec2 q = (points[i] - mid) * scale;
        const bool duplicate = std::any_of(normalized.begin(), normalized.end(), [&](const Vec2& r) {
            return (r - q).norm() <= kDuplicateEps;
        });
        if (duplicate) continue;
        normalized.push_back(q);
        out.planar_points.push_back(points[i]);
        out.source_index.push_back(i);
    }
    out.center_index = 0;

    const int n = static_cast<int>(normalized.size());
    if (n < 3) {
        throw Error(ErrorCode::TooFewPoints, "fewer than 3 distinct points");
    }
    int third = -1;
    for (int i = 2; i < n; ++i) {
        if (std::abs(orient(normalized[0], normalized[1], normalized[i])) > kOrientEps) {
            third = i;
            break;
        }
    }
    if (third < 0) throw Error(ErrorCode::CollinearInput, "all points are collinear");

    BowyerWatson bw(normalized);
    bw.start(0, 1, third);
    for (int i = 2; i < n; ++i) {
        if (i != third) bw.insert(i);
    }
    out.triangles = bw.real_triangles();
    return out;
}

std::vector<Face> one_ring(const LocalTriangulation& tri)
{
    std::vector<Face> ring;
    for (const Face& f : tri.triangles) {
        if (f[0] == tri.center_index || f[1] == tri.center_index || f[2] == tri.center_index) {
            ring.push_back(f);
        }
    }
    if (ring.empty()) {
        throw Error(ErrorCode::IsolatedCenter, "center point is in no triangle");
    }
    return ring;
}

} // namespace totcurv
