#pragma once

#include <totcurv/curvature.hpp>
#include <totcurv/sampling.hpp>
#include <totcurv/shapes.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace totcurv {

/// One mesh of the sphere/torus resolution study.
struct ResolutionRow {
    std::string shape;  // "sphere" or "torus"
    int resolution = 0; // subdivisions or grid size
    std::size_t faces = 0;
    double rmse = 0.0;
    std::vector<double> estimate; // per-triangle kappa
    std::vector<double> reference;
};

/// Icospheres s = 4, 5, 6 (radius 1) and tori R = 2, r = 1 on 9x9, 18x18,
/// 36x36 grids, all with analytic normals.
std::vector<ResolutionRow> run_resolution_study(unsigned threads = 1);

/// Sampled torus cloud with analytic attributes at every point.
struct SampledSurface {
    std::vector<Vec3> points;
    std::vector<Vec3> normals; // analytic
    std::vector<double> density;
};

/// Samples `surface` through its grid mesh (nu x nv; for spheres nu is the
/// icosphere subdivision level) and snaps every sample onto the analytic
/// surface.
SampledSurface sample_parametric(const ParametricSurface& surface, int nu, int nv,
                                 const SamplingConfig& config);

struct CloudStudyRow {
    SamplingMode mode = SamplingMode::Uniform;
    std::size_t points = 0;
    std::size_t k = 0;
    double rmse_gt = 0.0;  // analytic normals
    double rmse_est = 0.0; // PCA + MST normals
    double density_range = 0.0;
    std::size_t failures_gt = 0;
    std::size_t failures_est = 0;
};

struct CloudStudyConfig {
    double R = 2.0;
    double r = 1.0;
    std::size_t dense_count = 20000;
    std::size_t sparse_count = 2000;
    double oversample = 2.0;
    std::uint64_t seed = 42;
    int grid = 128; // tessellation the samples are drawn from
    unsigned threads = 1;
};

/// Torus cloud matrix {uniform, nonuniform, sparse} x {analytic, estimated}
/// normals, k chosen by default_k.
std::vector<CloudStudyRow> run_torus_cloud_study(const CloudStudyConfig& config);

} // namespace totcurv
