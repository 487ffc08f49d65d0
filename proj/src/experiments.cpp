#include <totcurv/experiments.hpp>
#include <totcurv/metrics.hpp>
#include <totcurv/normals.hpp>
#include <totcurv/pointcloud.hpp>

#include <algorithm>

namespace totcurv {

namespace {

ResolutionRow evaluate(const std::string& shape, int resolution, const TriangleMesh& mesh,
                       const ParametricSurface& surface, unsigned threads)
{
    ResolutionRow row;
    row.shape = shape;
    row.resolution = resolution;
    row.faces = mesh.num_faces();
    row.estimate =
        total_curvature_per_triangle(mesh, analytic_vertex_normals(mesh, surface), threads).per_triangle;
    row.reference = gt_per_triangle(mesh, surface).per_triangle;
    row.rmse = rmse(row.estimate, row.reference);
    return row;
}

} // namespace

std::vector<ResolutionRow> run_resolution_study(unsigned threads)
{
    std::vector<ResolutionRow> rows;
    const auto sphere = ParametricSurface::sphere(1.0);
    for (int s : {4, 5, 6}) rows.push_back(evaluate("sphere", s, icosphere(s, 1.0), sphere, threads));
    const auto torus = ParametricSurface::torus(2.0, 1.0);
    for (int n : {9, 18, 36}) rows.push_back(evaluate("torus", n, torus_grid(2.0, 1.0, n, n), torus, threads));
    return rows;
}

SampledSurface sample_parametric(const ParametricSurface& surface, int nu, int nv,
                                 const SamplingConfig& config)
{
    const TriangleMesh mesh = surface.kind() == ParametricSurface::Kind::Sphere
                                  ? icosphere(std::max(1, nu), surface.radius())
                                  : periodic_grid(surface, nu, nv);
    const SurfaceSamples samples = sample_surface(mesh, config);
    SampledSurface out;
    out.points.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const SurfacePoint sp = surface.snap(mesh, samples.face[i], samples.bary[i]);
        out.points.push_back(sp.position);
        out.normals.push_back(sp.normal);
        out.density.push_back(sp.density);
    }
    return out;
}

std::vector<CloudStudyRow> run_torus_cloud_study(const CloudStudyConfig& config)
{
    const auto torus = ParametricSurface::torus(config.R, config.r);
    std::vector<CloudStudyRow> rows;
    for (SamplingMode mode : {SamplingMode::Uniform, SamplingMode::Nonuniform, SamplingMode::Sparse}) {
        SamplingConfig sc;
        sc.mode = mode;
        sc.target_count = mode == SamplingMode::Sparse ? config.sparse_count : config.dense_count;
        sc.seed = config.seed;
        sc.oversample_factor = config.oversample;
        const SampledSurface cloud = sample_parametric(torus, config.grid, config.grid, sc);

        CloudStudyRow row;
        row.mode = mode;
        row.points = cloud.points.size();
        row.k = default_k(row.points);
        const auto [lo, hi] = std::minmax_element(cloud.density.begin(), cloud.density.end());
        row.density_range = *hi - *lo;

        const KnnIndex index(cloud.points);
        const PointCurvature with_gt = pointcloud_total_curvature(index, cloud.normals, row.k, config.threads);
        row.rmse_gt = rmse(with_gt.density, cloud.density);
        row.failures_gt = with_gt.failures();

        const PcaNormals pca = estimate_normals_pca(index, row.k, config.threads);
        const OrientedNormals oriented = orient_normals_mst(index, pca.normals, row.k);
        const PointCurvature with_est =
            pointcloud_total_curvature(index, oriented.normals, row.k, config.threads);
        row.rmse_est = rmse(with_est.density, cloud.density);
        row.failures_est = with_est.failures();
        rows.push_back(row);
    }
    return rows;
}

} // namespace totcurv
