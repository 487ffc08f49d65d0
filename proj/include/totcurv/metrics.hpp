#pragma once

#include <totcurv/geometry.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace totcurv {

/// sqrt(mean((a_i - b_i)^2)). Throws SizeMismatch / EmptyInput.
double rmse(std::span<const double> a, std::span<const double> b);

/// Closest point on the closed triangle abc (Voronoi-region walk).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

double point_to_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/// Bounding-volume hierarchy over a mesh's faces for exact point-to-surface
/// distance queries. Immutable after construction.
class TriangleBvh {
public:
    explicit TriangleBvh(const TriangleMesh& mesh); // throws EmptyMesh

    /// Distance from p to the nearest face.
    double distance(const Vec3& p) const;

private:
    struct Node {
        Eigen::AlignedBox3d box;
        int begin = 0;
        int end = 0;
        int left = -1;
        int right = -1;
    };

    int build(int begin, int end);

    const TriangleMesh* mesh_;
    std::vector<int> order_;
    std::vector<Eigen::AlignedBox3d> boxes_;
    std::vector<Vec3> centers_;
    std::vector<Node> nodes_;
};

struct HausdorffResult {
    double rms = 0.0;
    double max = 0.0;
    std::size_t sample_count = 0; // points measured, both directions pooled
};

/// Symmetric sampled distance. Each mesh contributes `samples` area-uniform
/// points plus its vertices; each point is measured against the other mesh.
/// max is over both directions, rms pools the squared distances of both.
/// Throws EmptyMesh.
HausdorffResult hausdorff(const TriangleMesh& a, const TriangleMesh& b, std::size_t samples,
                          std::uint64_t seed, unsigned threads = 1);

/// Metric bundle for reports.
struct EvalReport {
    double rmse = 0.0;
    double hausdorff_rms = 0.0;
    double hausdorff_max = 0.0;
    double diagonal = 0.0; // bounding-box diagonal used for normalized values
    std::size_t sample_count = 0;
    std::uint64_t seed = 42;
};

} // namespace totcurv
