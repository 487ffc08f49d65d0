#include <totcurv/curvature.hpp>
#include <totcurv/decimation.hpp>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <string>
#include <tuple>

namespace totcurv {

DecimationMethod parse_decimation_method(std::string_view name)
{
    if (name == "qslim") return DecimationMethod::Qslim;
    if (name == "edge-midpoint" || name == "edge_midpoint") return DecimationMethod::EdgeMidpoint;
    throw Error(ErrorCode::InvalidArgument, "unknown decimation method '" + std::string(name) + "'");
}

std::string_view to_string(DecimationMethod method)
{
    return method == DecimationMethod::Qslim ? "qslim" : "edge-midpoint";
}

void DecimationConfig::validate() const
{
    if (target_faces < 4) throw Error(ErrorCode::InvalidArgument, "target_faces must be >= 4");
    if (!(weight_floor >= 0.0)) throw Error(ErrorCode::InvalidArgument, "weight_floor must be >= 0");
}

std::vector<Quadric> vertex_quadrics(const TriangleMesh& mesh)
{
    std::vector<Quadric> q(mesh.num_vertices(), Quadric::Zero());
    for (const Face& f : mesh.faces) {
        const Vec3& a = mesh.vertices[f[0]];
        const Vec3 cross = (mesh.vertices[f[1]] - a).cross(mesh.vertices[f[2]] - a);
        const double len = cross.norm();
        if (len == 0.0) continue;
        const Vec3 n = cross / len;
        const Eigen::Vector4d plane(n.x(), n.y(), n.z(), -n.dot(a));
        const Quadric kq = (0.5 * len) * plane * plane.transpose();
        for (int k = 0; k < 3; ++k) q[f[k]] += kq;
    }
    return q;
}

double quadric_error(const Quadric& q, const Vec3& x)
{
    const Eigen::Vector4d h(x.x(), x.y(), x.z(), 1.0);
    return h.dot(q * h);
}

std::vector<double> curvature_vertex_weights(const TriangleMesh& mesh, unsigned threads)
{
    const auto normals = vertex_normals_area_weighted(mesh);
    const auto field = total_curvature_per_triangle(mesh, normals, threads);
    return per_vertex_curvature_density(mesh, field);
}

namespace {

// Triangle soup with vertex-to-face incidence, supporting edge collapses.
class EditableMesh {
public:
    explicit EditableMesh(const TriangleMesh& mesh)
        : pos_(mesh.vertices), faces_(mesh.faces), face_alive_(mesh.num_faces(), 1),
          vertex_alive_(mesh.num_vertices(), 1), incident_(mesh.num_vertices()),
          live_faces_(mesh.num_faces())
    {
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            for (int v : faces_[f]) incident_[v].push_back(static_cast<int>(f));
        }
    }

    std::size_t live_faces() const { return live_faces_; }
    bool alive(int v) const { return vertex_alive_[v] != 0; }
    const Vec3& position(int v) const { return pos_[v]; }

    std::vector<int> neighbors(int v) const
    {
        std::vector<int> out;
        for (int f : incident_[v]) {
            for (int w : faces_[f]) {
                if (w != v) out.push_back(w);
            }
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<int> faces_with_edge(int a, int b) const
    {
        std::vector<int> out;
        for (int f : incident_[a]) {
            const Face& t = faces_[f];
            if (t[0] == b || t[1] == b || t[2] == b) out.push_back(f);
        }
        return out;
    }

    bool on_boundary(int v) const
    {
        for (int w : neighbors(v)) {
            if (faces_with_edge(v, w).size() == 1) return true;
        }
        return false;
    }

    bool can_collapse(int keep, int drop, const Vec3& target) const
    {
        if (!alive(keep) || !alive(drop) || keep == drop) return false;
        const auto shared = faces_with_edge(keep, drop);
        if (shared.empty() || shared.size() > 2) return false;

        // link condition: common neighbours are exactly the opposite corners
        std::vector<int> opposite;
        for (int f : shared) {
            for (int w : faces_[f]) {
                if (w != keep && w != drop) opposite.push_back(w);
            }
        }
        std::sort(opposite.begin(), opposite.end());
        const auto nk = neighbors(keep);
        const auto nd = neighbors(drop);
        std::vector<int> common;
        std::set_intersection(nk.begin(), nk.end(), nd.begin(), nd.end(), std::back_inserter(common));
        if (common != opposite) return false;
        if (shared.size() == 2 && on_boundary(keep) && on_boundary(drop)) return false;
        // the merged vertex of a closed fan needs three neighbours (no tetrahedron collapse)
        if (shared.size() == 2 && nk.size() + nd.size() - common.size() - 2 < 3) return false;

        for (int v : {keep, drop}) {
            for (int f : incident_[v]) {
                if (std::find(shared.begin(), shared.end(), f) != shared.end()) continue;
                std::array<Vec3, 3> before, after;
                for (int k = 0; k < 3; ++k) {
                    const int w = faces_[f][k];
                    before[k] = pos_[w];
                    after[k] = (w == keep || w == drop) ? target : pos_[w];
                }
                const Vec3 n0 = (before[1] - before[0]).cross(before[2] - before[0]);
                const Vec3 n1 = (after[1] - after[0]).cross(after[2] - after[0]);
                if (is_degenerate(after[0], after[1], after[2])) return false;
                if (n0.dot(n1) < 0.0) return false;
            }
        }
        return true;
    }

    void collapse(int keep, int drop, const Vec3& target)
    {
        const auto shared = faces_with_edge(keep, drop);
        for (int f : shared) {
            face_alive_[f] = 0;
            --live_faces_;
            for (int w : faces_[f]) {
                auto& list = incident_[w];
                list.erase(std::remove(list.begin(), list.end(), f), list.end());
            }
        }
        for (int f : incident_[drop]) {
            for (int& w : faces_[f]) {
                if (w == drop) w = keep;
            }
            incident_[keep].push_back(f);
        }
        incident_[drop].clear();
        vertex_alive_[drop] = 0;
        pos_[keep] = target;
    }

    TriangleMesh compact() const
    {
        TriangleMesh out;
        std::vector<int> remap(pos_.size(), -1);
        for (std::size_t v = 0; v < pos_.size(); ++v) {
            if (!vertex_alive_[v]) continue;
            remap[v] = static_cast<int>(out.vertices.size());
            out.vertices.push_back(pos_[v]);
        }
        for (std::size_t f = 0; f < faces_.size(); ++f) {
            if (!face_alive_[f]) continue;
            out.faces.push_back({remap[faces_[f][0]], remap[faces_[f][1]], remap[faces_[f][2]]});
        }
        return out;
    }

private:
    std::vector<Vec3> pos_;
    std::vector<Face> faces_;
    std::vector<char> face_alive_;
    std::vector<char> vertex_alive_;
    std::vector<std::vector<int>> incident_;
    std::size_t live_faces_;
};

struct Placement {
    double cost = 0.0;
    Vec3 position = Vec3::Zero();
};

// Shared greedy loop; `place(a, b)` prices an edge, `merge(keep, drop)`
// updates per-vertex state after a collapse.
DecimationResult run_collapses(const TriangleMesh& mesh, const DecimationConfig& config,
                               const std::function<Placement(int, int, const EditableMesh&)>& place,
                               const std::function<void(int, int)>& merge)
{
    DecimationResult result;
    if (mesh.num_faces() <= config.target_faces) {
        result.mesh = mesh;
        return result;
    }
    EditableMesh em(mesh);
    std::vector<unsigned> stamp(mesh.num_vertices(), 0);

    // (cost, a, b, stamp_a, stamp_b, position) ordered by cost then indices
    using Entry = std::tuple<double, int, int, unsigned, unsigned, double, double, double>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    auto push_edges_of = [&](int v) {
        for (int w : em.neighbors(v)) {
            const int a = std::min(v, w);
            const int b = std::max(v, w);
            const Placement pl = place(a, b, em);
            heap.emplace(pl.cost, a, b, stamp[a], stamp[b], pl.position.x(), pl.position.y(),
                         pl.position.z());
        }
    };
    for (int v = 0; v < static_cast<int>(mesh.num_vertices()); ++v) {
        for (int w : em.neighbors(v)) {
            if (v < w) {
                const Placement pl = place(v, w, em);
                heap.emplace(pl.cost, v, w, stamp[v], stamp[w], pl.position.x(), pl.position.y(),
                             pl.position.z());
            }
        }
    }

    while (em.live_faces() > config.target_faces && !heap.empty()) {
        const auto [cost, a, b, sa, sb, x, y, z] = heap.top();
        heap.pop();
        if (!em.alive(a) || !em.alive(b) || stamp[a] != sa || stamp[b] != sb) continue;
        const Vec3 target(x, y, z);
        if (!em.can_collapse(a, b, target)) continue;
        em.collapse(a, b, target);
        merge(a, b);
        result.collapses.emplace_back(a, b);
        const auto ring = em.neighbors(a);
        ++stamp[a];
        for (int w : ring) ++stamp[w];
        push_edges_of(a);
        for (int w : ring) push_edges_of(w);
    }
    result.target_reached = em.live_faces() <= config.target_faces;
    result.mesh = em.compact();
    return result;
}

void check_inputs(const TriangleMesh& mesh, const std::vector<double>& weights,
                  const DecimationConfig& config)
{
    config.validate();
    mesh.validate();
    if (weights.size() != mesh.num_vertices()) {
        throw Error(ErrorCode::SizeMismatch, "need one weight per vertex");
    }
}

} // namespace

DecimationResult qslim_decimate(const TriangleMesh& mesh, const std::vector<double>& weights,
                                const DecimationConfig& config)
{
    check_inputs(mesh, weights, config);
    std::vector<Quadric> q = vertex_quadrics(mesh);
    if (config.curvature_weighting) {
        for (std::size_t v = 0; v < q.size(); ++v) q[v] *= config.weight_floor + weights[v];
    }

    auto place = [&](int a, int b, const EditableMesh& em) {
        const Quadric sum = q[a] + q[b];
        const Eigen::Matrix3d A = sum.topLeftCorner<3, 3>();
        const Vec3 rhs = -sum.topRightCorner<3, 1>();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(A);
        const Vec3 lambda = eig.eigenvalues();
        if (lambda[0] > 0.0 && lambda[2] / lambda[0] <= 1e8) {
            const Vec3 x = eig.eigenvectors() *
                           (eig.eigenvectors().transpose() * rhs).cwiseQuotient(lambda);
            return Placement{std::max(0.0, quadric_error(sum, x)), x};
        }
        const Vec3& pa = em.position(a);
        const Vec3& pb = em.position(b);
        Placement best{std::max(0.0, quadric_error(sum, pa)), pa};
        for (const Vec3& c : {pb, Vec3(0.5 * (pa + pb))}) {
            const double e = std::max(0.0, quadric_error(sum, c));
            if (e < best.cost) best = Placement{e, c};
        }
        return best;
    };
    auto merge = [&](int keep, int drop) { q[keep] += q[drop]; };
    return run_collapses(mesh, config, place, merge);
}

DecimationResult edge_midpoint_decimate(const TriangleMesh& mesh,
                                        const std::vector<double>& weights,
                                        const DecimationConfig& config)
{
    check_inputs(mesh, weights, config);
    std::vector<double> w = weights;
    auto place = [&](int a, int b, const EditableMesh& em) {
        const Vec3& pa = em.position(a);
        const Vec3& pb = em.position(b);
        double cost = (pa - pb).norm();
        if (config.curvature_weighting) cost *= config.weight_floor + 0.5 * (w[a] + w[b]);
        return Placement{cost, 0.5 * (pa + pb)};
    };
    auto merge = [&](int keep, int drop) { w[keep] = std::max(w[keep], w[drop]); };
    return run_collapses(mesh, config, place, merge);
}

DecimationResult decimate(const TriangleMesh& mesh, const std::vector<double>& weights,
                          const DecimationConfig& config)
{
    if (config.method == DecimationMethod::Qslim) return qslim_decimate(mesh, weights, config);
    return edge_midpoint_decimate(mesh, weights, config);
}

} // namespace totcurv
