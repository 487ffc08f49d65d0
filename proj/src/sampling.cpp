#include <totcurv/random.hpp>
#include <totcurv/sampling.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

namespace totcurv {

SamplingMode parse_sampling_mode(std::string_view name)
{
    if (name == "uniform") return SamplingMode::Uniform;
    if (name == "nonuniform") return SamplingMode::Nonuniform;
    if (name == "sparse") return SamplingMode::Sparse;
    throw Error(ErrorCode::InvalidArgument, "unknown sampling mode '" + std::string(name) + "'");
}

std::string_view to_string(SamplingMode mode)
{
    switch (mode) {
    case SamplingMode::Uniform: return "uniform";
    case SamplingMode::Nonuniform: return "nonuniform";
    case SamplingMode::Sparse: return "sparse";
    }
    return "uniform";
}

void SamplingConfig::validate() const
{
    if (target_count < 1) throw Error(ErrorCode::InvalidArgument, "target_count must be >= 1");
    if (!(oversample_factor > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "oversample_factor must be > 1");
    }
}

namespace {

std::vector<double> cumulative_areas(const TriangleMesh& mesh)
{
    std::vector<double> cdf(mesh.num_faces());
    double total = 0.0;
    for (std::size_t f = 0; f < mesh.num_faces(); ++f) {
        const Face& t = mesh.faces[f];
        total += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        cdf[f] = total;
    }
    if (!(total > 0.0)) throw Error(ErrorCode::EmptyMesh, "mesh has zero surface area");
    return cdf;
}

void push_sample(const TriangleMesh& mesh, int face, const Vec3& bary, SurfaceSamples& out)
{
    const Face& t = mesh.faces[face];
    Vec3 p = Vec3::Zero();
    for (int k = 0; k < 3; ++k) p += bary[k] * mesh.vertices[t[k]];
    out.cloud.points.push_back(p);
    if (mesh.has_normals()) {
        Vec3 n = Vec3::Zero();
        for (int k = 0; k < 3; ++k) n += bary[k] * mesh.vertex_normals[t[k]];
        out.cloud.normals.push_back(n.normalized());
    }
    out.face.push_back(face);
    out.bary.push_back(bary);
}

class SpatialHash {
public:
    explicit SpatialHash(double cell) : inv_(1.0 / cell) {}

    bool has_neighbor_within(const std::vector<Vec3>& pts, const Vec3& p, double r2) const
    {
        const auto c = cell_of(p);
        for (long dx = -1; dx <= 1; ++dx) {
            for (long dy = -1; dy <= 1; ++dy) {
                for (long dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find(key(c[0] + dx, c[1] + dy, c[2] + dz));
                    if (it == cells_.end()) continue;
                    for (int i : it->second) {
                        if ((pts[i] - p).squaredNorm() < r2) return true;
                    }
                }
            }
        }
        return false;
    }

    void insert(const Vec3& p, int id)
    {
        const auto c = cell_of(p);
        cells_[key(c[0], c[1], c[2])].push_back(id);
    }

private:
    std::array<long, 3> cell_of(const Vec3& p) const
    {
        return {static_cast<long>(std::floor(p.x() * inv_)), static_cast<long>(std::floor(p.y() * inv_)),
                static_cast<long>(std::floor(p.z() * inv_))};
    }

    static std::uint64_t key(long x, long y, long z)
    {
        const auto h = [](long v) { return static_cast<std::uint64_t>(v) & 0x1FFFFFULL; };
        return (h(x) << 42) | (h(y) << 21) | h(z);
    }

    double inv_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

// Indices of the candidates accepted by sequential dart throwing.
std::vector<int> throw_darts(const std::vector<Vec3>& candidates, double radius)
{
    SpatialHash grid(radius);
    std::vector<Vec3> kept;
    std::vector<int> ids;
    const double r2 = radius * radius;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (grid.has_neighbor_within(kept, candidates[i], r2)) continue;
        grid.insert(candidates[i], static_cast<int>(kept.size()));
        kept.push_back(candidates[i]);
        ids.push_back(static_cast<int>(i));
    }
    return ids;
}

} // namespace

SurfaceSamples sample_points_on_mesh(const TriangleMesh& mesh, std::size_t count,
                                     std::uint64_t seed)
{
    const std::vector<double> cdf = cumulative_areas(mesh);
    const double total = cdf.back();
    CounterRng rng(seed);
    SurfaceSamples out;
    out.cloud.points.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double pick = rng.uniform() * total;
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), pick);
        const int face = static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1));
        const double s = std::sqrt(rng.uniform());
        const double t = rng.uniform();
        push_sample(mesh, face, Vec3(1.0 - s, s * (1.0 - t), s * t), out);
    }
    return out;
}

SurfaceSamples poisson_disk_sample(const TriangleMesh& mesh, std::size_t target_count,
                                   std::uint64_t seed)
{
    if (target_count < 1) throw Error(ErrorCode::InvalidArgument, "target_count must be >= 1");
    const double area = cumulative_areas(mesh).back();
    const std::size_t pool_size = std::max<std::size_t>(30 * target_count, 1000);
    const SurfaceSamples pool = sample_points_on_mesh(mesh, pool_size, seed);

    const double lo_count = 0.9 * static_cast<double>(target_count);
    const double hi_count = 1.1 * static_cast<double>(target_count);
    auto accept = [&](double n) { return n >= lo_count && n <= hi_count; };

    // radius of a saturated random packing holding the target
    double radius = std::sqrt(0.7 * area / static_cast<double>(target_count));
    double lo = 0.0; // radius known to give too many points
    double hi = 0.0; // radius known to give too few points
    std::vector<int> ids;
    for (int iter = 0; iter < 30; ++iter) {
        ids = throw_darts(pool.cloud.points, radius);
        const double n = static_cast<double>(ids.size());
        if (accept(n)) {
            SurfaceSamples out;
            out.radius = radius;
            for (int i : ids) push_sample(mesh, pool.face[i], pool.bary[i], out);
            return out;
        }
        if (n > hi_count) {
            lo = radius;
        } else {
            hi = radius;
        }
        if (hi == 0.0) {
            radius *= 2.0;
        } else if (lo == 0.0) {
            radius *= 0.5;
        } else {
            radius = std::sqrt(lo * hi);
        }
    }
    throw Error(ErrorCode::UnreachableTarget,
                "no radius gives " + std::to_string(target_count) + " points (+-10%)");
}

SurfaceSamples nonuniform_sample(const TriangleMesh& mesh, std::size_t target_count,
                                 std::uint64_t seed, double oversample_factor)
{
    if (!(oversample_factor > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "oversample_factor must be > 1");
    }
    const auto dense_target =
        static_cast<std::size_t>(std::llround(oversample_factor * static_cast<double>(target_count)));
    SurfaceSamples dense = poisson_disk_sample(mesh, dense_target, seed);
    if (dense.size() < target_count) {
        throw Error(ErrorCode::UnreachableTarget, "oversampled set is smaller than the target");
    }

    // partial Fisher-Yates on an independent stream, then restore input order
    CounterRng rng(CounterRng::mix(seed ^ 0x6E6F6E756E69666FULL));
    std::vector<int> perm(dense.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = 0; i < target_count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(perm.size() - i));
        std::swap(perm[i], perm[j]);
    }
    perm.resize(target_count);
    std::sort(perm.begin(), perm.end());

    SurfaceSamples out;
    out.radius = dense.radius;
    for (int i : perm) push_sample(mesh, dense.face[i], dense.bary[i], out);
    return out;
}

SurfaceSamples sample_surface(const TriangleMesh& mesh, const SamplingConfig& config)
{
    config.validate();
    switch (config.mode) {
    case SamplingMode::Nonuniform:
        return nonuniform_sample(mesh, config.target_count, config.seed, config.oversample_factor);
    case SamplingMode::Uniform:
    case SamplingMode::Sparse:
        break;
    }
    return poisson_disk_sample(mesh, config.target_count, config.seed);
}

} // namespace totcurv
