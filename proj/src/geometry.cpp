#include <totcurv/geometry.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <unordered_map>

namespace totcurv {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DegenerateTriangle: return "DegenerateTriangle";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::IsolatedVertex: return "IsolatedVertex";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::TooFewNeighbors: return "TooFewNeighbors";
    case ErrorCode::DegenerateNeighborhood: return "DegenerateNeighborhood";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::CollinearInput: return "CollinearInput";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::IsolatedCenter: return "IsolatedCenter";
    case ErrorCode::InvalidRadii: return "InvalidRadii";
    case ErrorCode::SelfIntersectingTube: return "SelfIntersectingTube";
    case ErrorCode::MissingUV: return "MissingUV";
    case ErrorCode::UnreachableTarget: return "UnreachableTarget";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::EmptyMesh: return "EmptyMesh";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnsupportedElement: return "UnsupportedElement";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

namespace {

void check_unit(const std::vector<Vec3>& normals, const char* what)
{
    for (std::size_t i = 0; i < normals.size(); ++i) {
        if (std::abs(normals[i].norm() - 1.0) > 1e-9) {
            throw Error(ErrorCode::InvalidArgument,
                        std::string(what) + " " + std::to_string(i) + " is not unit length");
        }
    }
}

} // namespace

void TriangleMesh::validate() const
{
    const auto n = static_cast<long>(vertices.size());
    for (std::size_t f = 0; f < faces.size(); ++f) {
        const Face& t = faces[f];
        for (int k = 0; k < 3; ++k) {
            if (t[k] < 0 || t[k] >= n) {
                throw Error(ErrorCode::InvalidArgument,
                            "face " + std::to_string(f) + " references a missing vertex");
            }
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
            throw Error(ErrorCode::InvalidArgument,
                        "face " + std::to_string(f) + " repeats a vertex");
        }
    }
    if (has_normals()) {
        if (vertex_normals.size() != vertices.size()) {
            throw Error(ErrorCode::SizeMismatch, "vertex_normals size differs from vertex count");
        }
        check_unit(vertex_normals, "vertex normal");
    }
    if (has_uv() && vertex_uv.size() != vertices.size()) {
        throw Error(ErrorCode::SizeMismatch, "vertex_uv size differs from vertex count");
    }
}

void PointCloud::validate() const
{
    if (has_normals()) {
        if (normals.size() != points.size()) {
            throw Error(ErrorCode::SizeMismatch, "normals size differs from point count");
        }
        check_unit(normals, "normal");
    }
}

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c)
{
    return 0.5 * (b - a).cross(c - a).norm();
}

double degenerate_area_eps(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const double longest =
        std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    return 1e-12 * longest;
}

bool is_degenerate(const Vec3& a, const Vec3& b, const Vec3& c)
{
    const double area = triangle_area(a, b, c);
    return !(area > degenerate_area_eps(a, b, c));
}

std::array<double, 3> corner_angles(const Vec3& a, const Vec3& b, const Vec3& c)
{
    if (is_degenerate(a, b, c)) {
        throw Error(ErrorCode::DegenerateTriangle, "corner angles of a degenerate triangle");
    }
    auto angle = [](const Vec3& apex, const Vec3& p, const Vec3& q) {
        const Vec3 u = p - apex;
        const Vec3 v = q - apex;
        return std::atan2(u.cross(v).norm(), u.dot(v));
    };
    return {angle(a, b, c), angle(b, c, a), angle(c, a, b)};
}

double cotangent(const Vec3& apex, const Vec3& p, const Vec3& q)
{
    const Vec3 u = p - apex;
    const Vec3 v = q - apex;
    return u.dot(v) / u.cross(v).norm();
}

TriangleStiffness per_triangle_stiffness(const Vec3& a, const Vec3& b, const Vec3& c)
{
    if (is_degenerate(a, b, c)) {
        throw Error(ErrorCode::DegenerateTriangle, "stiffness of a degenerate triangle");
    }
    const std::array<const Vec3*, 3> p{&a, &b, &c};
    TriangleStiffness out;
    for (int k = 0; k < 3; ++k) {
        // edge (i, j) is opposite corner k
        const int i = (k + 1) % 3;
        const int j = (k + 2) % 3;
        const double w = 0.5 * cotangent(*p[k], *p[i], *p[j]);
        out.s(i, j) = -w;
        out.s(j, i) = -w;
    }
    for (int i = 0; i < 3; ++i) {
        out.s(i, i) = -(out.s(i, (i + 1) % 3) + out.s(i, (i + 2) % 3));
    }
    return out;
}

double dirichlet_energy(const TriangleStiffness& stiffness, const Vec3& u)
{
    return u.dot(stiffness.s * u);
}

TopologyReport topology_report(const TriangleMesh& mesh)
{
    TopologyReport report;
    struct EdgeUse {
        int forward = 0;  // traversed min -> max
        int backward = 0; // traversed max -> min
    };
    std::map<std::pair<int, int>, EdgeUse> edges;
    std::vector<std::vector<std::pair<int, int>>> links(mesh.num_vertices());
    std::vector<char> used(mesh.num_vertices(), 0);

    for (const Face& f : mesh.faces) {
        if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) {
            ++report.degenerate_faces;
            continue;
        }
        for (int k = 0; k < 3; ++k) {
            const int a = f[k];
            const int b = f[(k + 1) % 3];
            const int c = f[(k + 2) % 3];
            auto& use = edges[{std::min(a, b), std::max(a, b)}];
            (a < b ? use.forward : use.backward) += 1;
            links[a].emplace_back(b, c);
            used[a] = 1;
        }
    }

    report.edges = edges.size();
    for (const auto& [key, use] : edges) {
        const int total = use.forward + use.backward;
        if (total == 1) {
            ++report.boundary_edges;
        } else if (total > 2) {
            ++report.nonmanifold_edges;
        } else if (use.forward != 1) {
            ++report.misoriented_edges;
        }
    }

    // A manifold vertex link is a single path or a single cycle.
    for (std::size_t v = 0; v < links.size(); ++v) {
        if (links[v].empty()) continue;
        std::unordered_map<int, int> degree;
        std::unordered_map<int, std::vector<int>> adj;
        for (const auto& [b, c] : links[v]) {
            ++degree[b];
            ++degree[c];
            adj[b].push_back(c);
            adj[c].push_back(b);
        }
        bool ok = true;
        for (const auto& [w, d] : degree) {
            if (d > 2) ok = false;
        }
        if (ok) {
            std::vector<int> stack{links[v].front().first};
            std::unordered_map<int, char> seen{{stack.back(), 1}};
            while (!stack.empty()) {
                const int w = stack.back();
                stack.pop_back();
                for (int x : adj[w]) {
                    if (!seen.count(x)) {
                        seen[x] = 1;
                        stack.push_back(x);
                    }
                }
            }
            ok = seen.size() == degree.size();
        }
        if (!ok) ++report.nonmanifold_vertices;
    }

    const long nv = static_cast<long>(std::count(used.begin(), used.end(), 1));
    report.euler_characteristic = nv - static_cast<long>(report.edges) +
                                  static_cast<long>(mesh.num_faces() - report.degenerate_faces);
    return report;
}

double bounding_box_diagonal(const std::vector<Vec3>& points)
{
    if (points.empty()) return 0.0;
    Eigen::AlignedBox3d box;
    for (const Vec3& p : points) box.extend(p);
    return box.diagonal().norm();
}

} // namespace totcurv
