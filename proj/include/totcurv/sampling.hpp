#pragma once

#include <totcurv/geometry.hpp>

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace totcurv {

enum class SamplingMode { Uniform, Nonuniform, Sparse };

SamplingMode parse_sampling_mode(std::string_view name); // throws InvalidArgument
std::string_view to_string(SamplingMode mode);

struct SamplingConfig {
    SamplingMode mode = SamplingMode::Uniform;
    std::size_t target_count = 20000;
    std::uint64_t seed = 42;
    double oversample_factor = 2.0; // nonuniform only

    void validate() const;
};

/// Points on a mesh surface, remembering where each one came from. When the
/// mesh has vertex normals, cloud.normals holds their normalized barycentric
/// interpolation.
struct SurfaceSamples {
    PointCloud cloud;
    std::vector<int> face;
    std::vector<Vec3> bary;
    double radius = 0.0; // Poisson-disk radius, 0 for plain random sampling

    std::size_t size() const { return cloud.size(); }
};

/// `count` points, each uniform over the surface area. Draw i only depends
/// on (seed, i), so a longer run extends a shorter one.
SurfaceSamples sample_points_on_mesh(const TriangleMesh& mesh, std::size_t count,
                                     std::uint64_t seed);

/// Dart throwing over a fixed stream of area-uniform candidates with a
/// spatial-hash rejection radius, bisected until the accepted count is
/// within 10% of the target. Throws UnreachableTarget.
SurfaceSamples poisson_disk_sample(const TriangleMesh& mesh, std::size_t target_count,
                                   std::uint64_t seed);

/// Poisson-disk sample of oversample_factor * target points, then a uniform
/// random subset of exactly target points.
SurfaceSamples nonuniform_sample(const TriangleMesh& mesh, std::size_t target_count,
                                 std::uint64_t seed, double oversample_factor = 2.0);

/// Dispatch on config.mode; sparse is a uniform run with a small target.
SurfaceSamples sample_surface(const TriangleMesh& mesh, const SamplingConfig& config);

} // namespace totcurv
