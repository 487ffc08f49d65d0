#pragma once

#include <totcurv/geometry.hpp>

#include <Eigen/Core>

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

namespace totcurv {

enum class DecimationMethod { Qslim, EdgeMidpoint };

DecimationMethod parse_decimation_method(std::string_view name); // "qslim" | "edge-midpoint"
std::string_view to_string(DecimationMethod method);

struct DecimationConfig {
    DecimationMethod method = DecimationMethod::Qslim;
    std::size_t target_faces = 1000;
    bool curvature_weighting = true;
    double weight_floor = 1e-3; // keeps flat regions collapsible

    void validate() const; // target_faces >= 4
};

using Quadric = Eigen::Matrix4d;

/// Q_v = sum over faces around v of area * p p^T with p = [n; -n.x] the
/// face's supporting plane.
std::vector<Quadric> vertex_quadrics(const TriangleMesh& mesh);

/// [x; 1]^T Q [x; 1].
double quadric_error(const Quadric& q, const Vec3& x);

struct DecimationResult {
    TriangleMesh mesh;
    bool target_reached = true; // false: no valid collapse was left (TargetUnreachable)
    /// Accepted collapses in order, as (kept, removed) input vertex indices.
    std::vector<std::pair<int, int>> collapses;
};

/// Quadric edge collapse. With weighting each vertex quadric is pre-scaled
/// by (weight_floor + weight); placement minimizes the merged quadric, or
/// takes the best of the endpoints and midpoint when that system has
/// condition number above 1e8. Collapses violating the link condition or
/// turning any surrounding face by more than 90 degrees are skipped.
DecimationResult qslim_decimate(const TriangleMesh& mesh, const std::vector<double>& weights,
                                const DecimationConfig& config);

/// Shortest-edge collapse to the midpoint; with weighting the edge length is
/// multiplied by weight_floor + the mean endpoint weight.
DecimationResult edge_midpoint_decimate(const TriangleMesh& mesh,
                                        const std::vector<double>& weights,
                                        const DecimationConfig& config);

/// Dispatches on config.method.
DecimationResult decimate(const TriangleMesh& mesh, const std::vector<double>& weights,
                          const DecimationConfig& config);

/// Per-vertex total curvature density from area-weighted vertex normals,
/// the default decimation weight.
std::vector<double> curvature_vertex_weights(const TriangleMesh& mesh, unsigned threads = 1);

} // namespace totcurv
