#include <totcurv/cli.hpp>
#include <totcurv/curvature.hpp>
#include <totcurv/decimation.hpp>
#include <totcurv/experiments.hpp>
#include <totcurv/io.hpp>
#include <totcurv/metrics.hpp>
#include <totcurv/normals.hpp>
#include <totcurv/pointcloud.hpp>
#include <totcurv/sampling.hpp>
#include <totcurv/shapes.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <functional>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

namespace totcurv {

namespace fs = std::filesystem;

namespace {

/// Bad flags or unreadable input: exit 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <typename F>
auto load_input(const fs::path& path, F&& loader)
{
    try {
        return loader(path);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

std::string kv(const std::string& key, double value)
{
    return key + "=" + format_number(value, 10);
}

struct Context {
    std::ostream& out;
    std::ostream& err;
    unsigned threads = 1;
    std::vector<std::string> header; // resolved configuration, one line per entry
};

// ------------------------------------------------------------------ gen

struct GenOptions {
    std::string out;
    int subdiv = -1;
    double radius = 1.0;
    double R = 2.0;
    double r = 1.0;
    int grid = 0;
    std::string knot = "torus23";
    double tube_radius = 0.25;
    int nu = 400;
    int nv = 40;
};

int write_generated(Context& ctx, const GenOptions& opt, const TriangleMesh& mesh,
                    const ParametricSurface& surface)
{
    const fs::path path(opt.out);
    write_obj(path, mesh, ctx.header);
    write_surface_sidecar(sidecar_path(path), surface, mesh.vertex_uv);
    const auto topo = topology_report(mesh);
    ctx.out << "vertices=" << mesh.num_vertices() << "\nfaces=" << mesh.num_faces()
            << "\neuler=" << topo.euler_characteristic << "\nsidecar=" << sidecar_path(path).string()
            << '\n';
    return kExitOk;
}

int cmd_gen_sphere(Context& ctx, const GenOptions& opt)
{
    const TriangleMesh mesh = icosphere(opt.subdiv, opt.radius);
    return write_generated(ctx, opt, mesh, ParametricSurface::sphere(opt.radius));
}

int cmd_gen_torus(Context& ctx, const GenOptions& opt)
{
    const TriangleMesh mesh = torus_grid(opt.R, opt.r, opt.grid, opt.grid);
    return write_generated(ctx, opt, mesh, ParametricSurface::torus(opt.R, opt.r));
}

int cmd_gen_knot(Context& ctx, const GenOptions& opt)
{
    const KnotCurve curve = opt.knot == "fig8" ? KnotCurve::figure_eight() : KnotCurve::torus_knot(2, 3);
    const TriangleMesh mesh = tube_knot(curve, opt.tube_radius, opt.nu, opt.nv);
    return write_generated(ctx, opt, mesh, ParametricSurface::tube(curve, opt.tube_radius));
}

// ------------------------------------------------------------------ sample

struct SampleOptions {
    std::string input;
    std::string mode = "uniform";
    std::size_t count = 0;
    std::uint64_t seed = 42;
    double oversample = 2.0;
    std::string normals = "auto"; // auto | analytic | mesh | none
    std::string out;
    std::string gt_csv;
};

std::optional<SurfaceSidecar> load_sidecar(const fs::path& mesh_path, const TriangleMesh& mesh)
{
    auto side = load_input(sidecar_path(mesh_path), read_surface_sidecar);
    if (side && side->uv.size() != mesh.num_vertices()) {
        throw UsageError("sidecar uv count does not match " + mesh_path.string());
    }
    return side;
}

void write_cloud(const fs::path& path, const PointCloud& cloud, const std::vector<double>& quality,
                 const std::vector<std::string>& comments)
{
    if (path.extension() == ".ply") {
        PlyPayload ply;
        ply.positions = cloud.points;
        ply.normals = cloud.normals;
        ply.quality = quality;
        ply.comments = comments;
        if (!quality.empty()) ply.colors = colorize(quality, 1.0, 99.0);
        write_ply(path, ply);
    } else {
        write_xyz(path, cloud);
    }
}

int cmd_sample(Context& ctx, const SampleOptions& opt)
{
    const fs::path in(opt.input);
    TriangleMesh mesh = load_input(in, read_mesh);
    const auto side = load_sidecar(in, mesh);

    SamplingConfig config;
    try {
        config.mode = parse_sampling_mode(opt.mode);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    config.target_count = opt.count ? opt.count : (config.mode == SamplingMode::Sparse ? 2000 : 20000);
    config.seed = opt.seed;
    config.oversample_factor = opt.oversample;

    std::string normals = opt.normals;
    if (normals == "auto") normals = side ? "analytic" : (mesh.has_normals() ? "mesh" : "none");
    if (normals == "analytic" && !side) throw UsageError("--normals analytic needs a .surface.json sidecar");
    if (normals == "mesh" && !mesh.has_normals()) mesh.vertex_normals = vertex_normals_area_weighted(mesh);
    if (side) mesh.vertex_uv = side->uv;

    const SurfaceSamples samples = sample_surface(mesh, config);
    PointCloud cloud = samples.cloud;
    std::vector<double> gt;
    if (normals == "analytic") {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const SurfacePoint sp = side->surface.snap(mesh, samples.face[i], samples.bary[i]);
            cloud.points[i] = sp.position;
            cloud.normals[i] = sp.normal;
            gt.push_back(sp.density);
        }
    } else if (normals == "none") {
        cloud.normals.clear();
    }
    if (cloud.normals.size() != cloud.points.size()) cloud.normals.clear();

    write_cloud(opt.out, cloud, gt, ctx.header);
    if (!opt.gt_csv.empty()) {
        if (gt.empty()) throw UsageError("--gt-csv needs analytic normals");
        CsvTable table{ctx.header, {"id", "gt"}, {}};
        for (std::size_t i = 0; i < gt.size(); ++i) table.rows.push_back({static_cast<long>(i), {gt[i]}});
        write_csv(opt.gt_csv, table);
    }
    ctx.out << "points=" << cloud.size() << '\n' << kv("radius", samples.radius) << '\n';
    return kExitOk;
}

// ------------------------------------------------------------------ curvature

struct CurvatureOptions {
    std::string input;
    std::string normals;
    std::string per = "triangle";
    std::size_t k = 0;
    std::string csv;
    std::string ply;
    std::string gt;
    double clip_lo = 1.0;
    double clip_hi = 99.0;
};

int cmd_curvature_mesh(Context& ctx, const CurvatureOptions& opt)
{
    const fs::path in(opt.input);
    TriangleMesh mesh = load_input(in, read_mesh);
    const auto side = load_sidecar(in, mesh);
    if (side) mesh.vertex_uv = side->uv;

    const std::string mode = opt.normals.empty() ? "auto" : opt.normals;
    std::vector<Vec3> normals;
    if (mode == "auto") {
        std::vector<int> isolated;
        normals = vertex_normals_area_weighted(mesh, &isolated);
        if (!isolated.empty()) ctx.err << "warning: " << isolated.size() << " isolated vertices\n";
    } else if (mode == "mesh") {
        if (!mesh.has_normals()) throw UsageError("input mesh carries no normals");
        normals = mesh.vertex_normals;
    } else if (mode == "analytic") {
        if (!side) throw UsageError("--normals analytic needs a .surface.json sidecar");
        normals = analytic_vertex_normals(mesh, side->surface);
    } else {
        const PlyPayload ply = load_input(fs::path(mode), [](const fs::path& p) { return read_ply(p); });
        if (ply.normals.size() != mesh.num_vertices()) throw UsageError("normal file does not match the mesh");
        for (const Vec3& n : ply.normals) normals.push_back(n.normalized());
    }

    const CurvatureField field = total_curvature_per_triangle(mesh, normals, ctx.threads);
    if (field.degenerate_faces) ctx.err << "warning: " << field.degenerate_faces << " degenerate faces\n";
    const std::vector<double> density = per_vertex_curvature_density(mesh, field);

    std::optional<CurvatureField> gt;
    if (side) gt = gt_per_triangle(mesh, side->surface);

    CsvTable table;
    table.comments = ctx.header;
    std::vector<double> est_col, gt_col;
    if (opt.per == "vertex") {
        table.header = {"id", "density"};
        if (gt) table.header.push_back("gt");
        for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
            std::vector<double> row{density[v]};
            if (gt) row.push_back(gt->per_vertex_density[v]);
            table.rows.emplace_back(static_cast<long>(v), row);
        }
        est_col = density;
        if (gt) gt_col = gt->per_vertex_density;
    } else if (opt.per == "triangle") {
        table.header = {"id", "kappa", "area"};
        if (gt) table.header.push_back("gt");
        for (std::size_t t = 0; t < mesh.num_faces(); ++t) {
            const Face& f = mesh.faces[t];
            std::vector<double> row{field.per_triangle[t],
                                    triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]])};
            if (gt) row.push_back(gt->per_triangle[t]);
            table.rows.emplace_back(static_cast<long>(t), row);
        }
        est_col = field.per_triangle;
        if (gt) gt_col = gt->per_triangle;
    } else {
        throw UsageError("--per must be triangle or vertex");
    }
    if (!opt.csv.empty()) write_csv(opt.csv, table);
    if (!opt.ply.empty()) {
        PlyPayload ply;
        ply.positions = mesh.vertices;
        ply.normals = normals;
        ply.faces = mesh.faces;
        ply.quality = density;
        ply.colors = colorize(density, opt.clip_lo, opt.clip_hi);
        ply.comments = ctx.header;
        write_ply(opt.ply, ply);
    }

    const double total = std::accumulate(field.per_triangle.begin(), field.per_triangle.end(), 0.0);
    ctx.out << "faces=" << mesh.num_faces() << '\n' << kv("total", total) << '\n';
    if (gt) ctx.out << kv("rmse_vs_gt", rmse(est_col, gt_col)) << '\n';
    return kExitOk;
}

int cmd_curvature_pcd(Context& ctx, const CurvatureOptions& opt)
{
    const fs::path in(opt.input);
    const PointCloud cloud = load_input(in, read_point_cloud);
    if (cloud.points.empty()) throw UsageError("point cloud is empty");
    const std::size_t k = opt.k ? opt.k : default_k(cloud.size());
    if (k < 6) throw UsageError("--k must be >= 6");

    const KnnIndex index(cloud.points);
    std::vector<Vec3> normals;
    const std::string mode = opt.normals.empty() ? "est" : opt.normals;
    if (mode == "file") {
        if (!cloud.has_normals()) throw UsageError("input cloud carries no normals");
        normals = cloud.normals;
    } else if (mode == "est") {
        if (cloud.size() < k) throw UsageError("cloud has fewer points than k");
        const PcaNormals pca = estimate_normals_pca(index, k, ctx.threads);
        if (!pca.degenerate.empty()) {
            ctx.err << "warning: " << pca.degenerate.size() << " degenerate neighbourhoods\n";
        }
        const OrientedNormals oriented = orient_normals_mst(index, pca.normals, k);
        if (oriented.components > 1) {
            ctx.err << "warning: kNN graph has " << oriented.components << " components\n";
        }
        normals = oriented.normals;
    } else {
        throw UsageError("--normals must be est or file");
    }

    const PointCurvature result = pointcloud_total_curvature(index, normals, k, ctx.threads);
    std::size_t counts[5] = {};
    for (PointStatus s : result.status) ++counts[static_cast<int>(s)];
    ctx.err << "per-point failures: collinear=" << counts[1] << " isolated_center=" << counts[2]
            << " too_few_points=" << counts[3] << " degenerate=" << counts[4] << '\n';

    if (!opt.csv.empty()) {
        CsvTable table{ctx.header, {"id", "density"}, {}};
        for (std::size_t i = 0; i < result.density.size(); ++i) {
            table.rows.push_back({static_cast<long>(i), {result.density[i]}});
        }
        write_csv(opt.csv, table);
    }
    if (!opt.ply.empty()) {
        PointCloud outc{cloud.points, normals};
        write_cloud(opt.ply, outc, result.density, ctx.header);
    }
    const double mean =
        std::accumulate(result.density.begin(), result.density.end(), 0.0) / static_cast<double>(result.density.size());
    ctx.out << "points=" << cloud.size() << "\nk=" << k << "\nfailures=" << result.failures() << '\n'
            << kv("mean_density", mean) << '\n';
    if (!opt.gt.empty()) {
        const CsvTable gt = load_input(fs::path(opt.gt), read_csv);
        const int col = gt.value_column("gt") >= 0 ? gt.value_column("gt") : 0;
        std::vector<double> ref;
        for (const auto& row : gt.rows) ref.push_back(row.second.at(col));
        if (ref.size() != result.density.size()) throw UsageError("ground-truth CSV length differs from the cloud");
        ctx.out << kv("rmse_vs_gt", rmse(result.density, ref)) << '\n';
    }
    return kExitOk;
}

// ------------------------------------------------------------------ decimate

struct DecimateOptions {
    std::string input;
    std::string method = "qslim";
    std::size_t target = 0;
    std::string weighting = "on";
    double weight_floor = 1e-3;
    std::string out;
};

int cmd_decimate(Context& ctx, const DecimateOptions& opt)
{
    const TriangleMesh mesh = load_input(fs::path(opt.input), read_mesh);
    DecimationConfig config;
    try {
        config.method = parse_decimation_method(opt.method);
        config.target_faces = opt.target;
        config.curvature_weighting = opt.weighting == "on";
        config.weight_floor = opt.weight_floor;
        config.validate();
        mesh.validate();
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
    const std::vector<double> weights = curvature_vertex_weights(mesh, ctx.threads);
    const DecimationResult result = decimate(mesh, weights, config);
    write_obj(opt.out, result.mesh, ctx.header);
    ctx.out << "faces=" << result.mesh.num_faces() << "\nvertices=" << result.mesh.num_vertices()
            << "\ncollapses=" << result.collapses.size() << "\ntarget_reached=" << (result.target_reached ? 1 : 0)
            << '\n';
    if (!result.target_reached) {
        ctx.err << "TargetUnreachable: no valid collapse left above " << config.target_faces << " faces\n";
        return kExitPipeline;
    }
    return kExitOk;
}

// ------------------------------------------------------------------ eval

struct EvalOptions {
    std::string a;
    std::string b;
    std::string col_a;
    std::string col_b;
    std::size_t samples = 100000;
    std::uint64_t seed = 42;
};

std::vector<double> csv_column(const CsvTable& table, const std::string& name, const std::string& file)
{
    int col = 0;
    if (!name.empty()) {
        col = table.value_column(name);
        if (col < 0) throw UsageError(file + " has no column '" + name + "'");
    }
    if (table.header.size() < 2) throw UsageError(file + " has no value column");
    std::vector<double> v;
    v.reserve(table.rows.size());
    for (const auto& row : table.rows) v.push_back(row.second[col]);
    return v;
}

int cmd_eval_rmse(Context& ctx, const EvalOptions& opt)
{
    const CsvTable a = load_input(fs::path(opt.a), read_csv);
    const CsvTable b = load_input(fs::path(opt.b), read_csv);
    const auto va = csv_column(a, opt.col_a, opt.a);
    const auto vb = csv_column(b, opt.col_b, opt.b);
    if (va.size() != vb.size()) {
        throw UsageError("CSV lengths differ: " + std::to_string(va.size()) + " vs " + std::to_string(vb.size()));
    }
    if (va.empty()) throw UsageError("CSV files have no rows");
    ctx.out << kv("rmse", rmse(va, vb)) << '\n';
    return kExitOk;
}

int cmd_eval_hausdorff(Context& ctx, const EvalOptions& opt)
{
    const TriangleMesh a = load_input(fs::path(opt.a), read_mesh);
    const TriangleMesh b = load_input(fs::path(opt.b), read_mesh);
    if (a.faces.empty() || b.faces.empty()) throw UsageError("meshes must have faces");
    const HausdorffResult h = hausdorff(a, b, opt.samples, opt.seed, ctx.threads);
    const double diag = bounding_box_diagonal(a.vertices);
    ctx.out << kv("rms", h.rms) << '\n'
            << kv("max", h.max) << '\n'
            << kv("diagonal", diag) << '\n'
            << kv("rms_normalized", diag > 0 ? h.rms / diag : 0.0) << '\n'
            << kv("max_normalized", diag > 0 ? h.max / diag : 0.0) << '\n'
            << "samples=" << h.sample_count << "\nseed=" << opt.seed << '\n';
    return kExitOk;
}

// ------------------------------------------------------------------ repro

struct ReproOptions {
    std::string out_dir = ".";
    std::size_t count = 20000;
    std::size_t sparse_count = 2000;
    std::uint64_t seed = 42;
    int grid = 128;
};

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::trunc);
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

int cmd_repro_table3(Context& ctx, const ReproOptions& opt)
{
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    const auto rows = run_resolution_study(ctx.threads);

    std::ostringstream md;
    md << "| shape | resolution | faces | RMSE |\n|---|---|---|---|\n";
    CsvTable summary{ctx.header, {"id", "is_torus", "resolution", "faces", "rmse"}, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string label = r.shape == "sphere" ? std::to_string(r.resolution) + "-subdivision"
                                                      : std::to_string(r.resolution) + " x " +
                                                            std::to_string(r.resolution) + " grid";
        md << "| " << r.shape << " | " << label << " | " << r.faces << " | " << format_number(r.rmse) << " |\n";
        summary.rows.push_back({static_cast<long>(i),
                                {r.shape == "torus" ? 1.0 : 0.0, static_cast<double>(r.resolution),
                                 static_cast<double>(r.faces), r.rmse}});

        CsvTable per{ctx.header, {"id", "kappa", "gt"}, {}};
        for (std::size_t t = 0; t < r.estimate.size(); ++t) {
            per.rows.push_back({static_cast<long>(t), {r.estimate[t], r.reference[t]}});
        }
        write_csv(dir / (r.shape + "_" + std::to_string(r.resolution) + ".csv"), per);
        ctx.out << r.shape << "_" << r.resolution << "_" << kv("rmse", r.rmse) << '\n';
    }
    write_csv(dir / "table3.csv", summary);
    write_text(dir / "table3.md", md.str());
    ctx.err << md.str();
    return kExitOk;
}

int cmd_repro_pcd_torus(Context& ctx, const ReproOptions& opt)
{
    const fs::path dir(opt.out_dir);
    fs::create_directories(dir);
    CloudStudyConfig config;
    config.dense_count = opt.count;
    config.sparse_count = opt.sparse_count;
    config.seed = opt.seed;
    config.grid = opt.grid;
    config.threads = ctx.threads;
    const auto rows = run_torus_cloud_study(config);

    std::ostringstream md;
    md << "| sampling | points | k | Ours (N est.) | Ours (N gt) |\n|---|---|---|---|---|\n";
    CsvTable table{ctx.header, {"id", "points", "k", "rmse_est", "rmse_gt", "density_range"}, {}};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string mode(to_string(r.mode));
        md << "| " << mode << " | " << r.points << " | " << r.k << " | " << format_number(r.rmse_est) << " | "
           << format_number(r.rmse_gt) << " |\n";
        table.rows.push_back({static_cast<long>(i),
                              {static_cast<double>(r.points), static_cast<double>(r.k), r.rmse_est, r.rmse_gt,
                               r.density_range}});
        ctx.out << mode << "_" << kv("rmse_est", r.rmse_est) << '\n'
                << mode << "_" << kv("rmse_gt", r.rmse_gt) << '\n';
    }
    write_csv(dir / "pcd_torus.csv", table);
    write_text(dir / "pcd_torus.md", md.str());
    ctx.err << md.str();
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Total curvature estimation on triangle meshes and point clouds", "totcurv"};
    app.require_subcommand(1);
    Context ctx{out, err, 1, {}};
    app.add_option("--threads", ctx.threads, "Worker threads for per-element stages")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    std::function<int()> action;

    // gen
    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate an evaluation mesh (OBJ + .surface.json sidecar)");
    gen_cmd->require_subcommand(1);
    auto* sphere = gen_cmd->add_subcommand("sphere", "Subdivided icosahedron");
    sphere->add_option("--subdiv", gen.subdiv, "Subdivision level")->required()->check(CLI::NonNegativeNumber);
    sphere->add_option("--radius", gen.radius, "Sphere radius")->capture_default_str();
    sphere->add_option("-o,--out", gen.out, "Output OBJ")->required();
    sphere->callback([&] { action = [&] { return cmd_gen_sphere(ctx, gen); }; });

    auto* torus = gen_cmd->add_subcommand("torus", "Grid-triangulated torus");
    torus->add_option("--R", gen.R, "Major radius")->capture_default_str();
    torus->add_option("--r", gen.r, "Minor radius")->capture_default_str();
    torus->add_option("--grid", gen.grid, "Grid size N (N x N)")->required()->check(CLI::Range(3, 100000));
    torus->add_option("-o,--out", gen.out, "Output OBJ")->required();
    torus->callback([&] { action = [&] { return cmd_gen_torus(ctx, gen); }; });

    auto* knot = gen_cmd->add_subcommand("knot", "Tube around a knot");
    knot->add_option("--kind", gen.knot, "torus23 | fig8")
        ->check(CLI::IsMember({"torus23", "fig8"}))
        ->capture_default_str();
    knot->add_option("--tube-radius", gen.tube_radius, "Tube radius")->capture_default_str();
    knot->add_option("--nu", gen.nu, "Samples along the curve")->capture_default_str()->check(CLI::Range(8, 1000000));
    knot->add_option("--nv", gen.nv, "Samples around the tube")->capture_default_str()->check(CLI::Range(8, 1000000));
    knot->add_option("-o,--out", gen.out, "Output OBJ")->required();
    knot->callback([&] { action = [&] { return cmd_gen_knot(ctx, gen); }; });

    // sample
    SampleOptions samp;
    auto* sample = app.add_subcommand("sample", "Sample a point cloud from a mesh");
    sample->add_option("input", samp.input, "Input mesh (.obj/.ply)")->required();
    sample->add_option("--mode", samp.mode, "uniform | nonuniform | sparse")
        ->check(CLI::IsMember({"uniform", "nonuniform", "sparse"}))
        ->capture_default_str();
    sample->add_option("--count", samp.count, "Target point count (default 20000, sparse 2000)");
    sample->add_option("--seed", samp.seed, "Random seed")->capture_default_str();
    sample->add_option("--oversample", samp.oversample, "Nonuniform oversampling factor")
        ->capture_default_str()
        ->check(CLI::Range(1.0 + 1e-9, 1e6));
    sample->add_option("--normals", samp.normals, "auto | analytic | mesh | none")
        ->check(CLI::IsMember({"auto", "analytic", "mesh", "none"}))
        ->capture_default_str();
    sample->add_option("-o,--out", samp.out, "Output cloud (.ply/.xyz)")->required();
    sample->add_option("--gt-csv", samp.gt_csv, "Write analytic density per point");
    sample->callback([&] { action = [&] { return cmd_sample(ctx, samp); }; });

    // curvature
    CurvatureOptions curv;
    auto* curvature = app.add_subcommand("curvature", "Total curvature of a mesh or point cloud");
    curvature->require_subcommand(1);
    auto* cmesh = curvature->add_subcommand("mesh", "Per-triangle total curvature of a mesh");
    cmesh->add_option("input", curv.input, "Input mesh (.obj/.ply)")->required();
    cmesh->add_option("--normals", curv.normals, "auto | mesh | analytic | <normals.ply>");
    cmesh->add_option("--per", curv.per, "triangle | vertex")
        ->check(CLI::IsMember({"triangle", "vertex"}))
        ->capture_default_str();
    cmesh->add_option("--csv", curv.csv, "CSV output");
    cmesh->add_option("--ply", curv.ply, "Colored PLY output");
    cmesh->add_option("--clip-lo", curv.clip_lo, "Lower color clip percentile")->capture_default_str();
    cmesh->add_option("--clip-hi", curv.clip_hi, "Upper color clip percentile")->capture_default_str();
    cmesh->callback([&] { action = [&] { return cmd_curvature_mesh(ctx, curv); }; });

    auto* cpcd = curvature->add_subcommand("pcd", "Per-point total curvature of a point cloud");
    cpcd->add_option("input", curv.input, "Input cloud (.ply/.xyz)")->required();
    cpcd->add_option("--k", curv.k, "Neighbourhood size (>= 6; default 20, or 10 below 5000 points)");
    cpcd->add_option("--normals", curv.normals, "est | file")->check(CLI::IsMember({"est", "file"}));
    cpcd->add_option("--csv", curv.csv, "CSV output");
    cpcd->add_option("--ply", curv.ply, "Colored PLY output");
    cpcd->add_option("--gt", curv.gt, "Ground-truth CSV for an RMSE report");
    cpcd->callback([&] {
        if (cpcd->count("--k") && curv.k < 6) throw CLI::ValidationError("--k", "must be >= 6");
        action = [&] { return cmd_curvature_pcd(ctx, curv); };
    });

    // decimate
    DecimateOptions dec;
    auto* decimate_cmd = app.add_subcommand("decimate", "Curvature-weighted edge-collapse decimation");
    decimate_cmd->add_option("input", dec.input, "Input mesh")->required();
    decimate_cmd->add_option("--method", dec.method, "qslim | edge-midpoint")
        ->check(CLI::IsMember({"qslim", "edge-midpoint"}))
        ->capture_default_str();
    decimate_cmd->add_option("--target-faces", dec.target, "Target face count")->required()->check(CLI::Range(4, INT32_MAX));
    decimate_cmd->add_option("--curvature-weight", dec.weighting, "on | off")
        ->check(CLI::IsMember({"on", "off"}))
        ->capture_default_str();
    decimate_cmd->add_option("--weight-floor", dec.weight_floor, "Added to every weight")->capture_default_str();
    decimate_cmd->add_option("-o,--out", dec.out, "Output OBJ")->required();
    decimate_cmd->callback([&] { action = [&] { return cmd_decimate(ctx, dec); }; });

    // eval
    EvalOptions ev;
    auto* eval = app.add_subcommand("eval", "Evaluation metrics");
    eval->require_subcommand(1);
    auto* ermse = eval->add_subcommand("rmse", "RMSE between two CSV columns");
    ermse->add_option("a", ev.a, "Estimate CSV")->required();
    ermse->add_option("b", ev.b, "Reference CSV")->required();
    ermse->add_option("--col-a", ev.col_a, "Column of the first file (default: first value column)");
    ermse->add_option("--col-b", ev.col_b, "Column of the second file (default: first value column)");
    ermse->callback([&] { action = [&] { return cmd_eval_rmse(ctx, ev); }; });
    auto* ehaus = eval->add_subcommand("hausdorff", "Sampled symmetric Hausdorff distance");
    ehaus->add_option("a", ev.a, "First mesh")->required();
    ehaus->add_option("b", ev.b, "Second mesh")->required();
    ehaus->add_option("--samples", ev.samples, "Samples per mesh")->capture_default_str()->check(CLI::Range(1000, INT32_MAX));
    ehaus->add_option("--seed", ev.seed, "Random seed")->capture_default_str();
    ehaus->callback([&] { action = [&] { return cmd_eval_hausdorff(ctx, ev); }; });

    // repro
    ReproOptions rep;
    auto* repro = app.add_subcommand("repro", "End-to-end evaluation scenarios");
    repro->require_subcommand(1);
    auto* t3 = repro->add_subcommand("table3", "Sphere and torus resolution study");
    t3->add_option("--out-dir", rep.out_dir, "Output directory")->capture_default_str();
    t3->callback([&] { action = [&] { return cmd_repro_table3(ctx, rep); }; });
    auto* pt = repro->add_subcommand("pcd-torus", "Torus point-cloud sampling x normals matrix");
    pt->add_option("--out-dir", rep.out_dir, "Output directory")->capture_default_str();
    pt->add_option("--count", rep.count, "Dense point count")->capture_default_str();
    pt->add_option("--sparse-count", rep.sparse_count, "Sparse point count")->capture_default_str();
    pt->add_option("--seed", rep.seed, "Random seed")->capture_default_str();
    pt->add_option("--grid", rep.grid, "Torus tessellation the samples are drawn from")->capture_default_str();
    pt->callback([&] { action = [&] { return cmd_repro_pcd_torus(ctx, rep); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        const CLI::App* failed = &app;
        for (;;) {
            const auto subs = failed->get_subcommands();
            if (subs.empty()) break;
            failed = subs.front();
        }
        err << failed->help();
        return kExitUsage;
    }

    // Keep global options and those of the selected subcommand chain.
    std::string active;
    for (const CLI::App* sub = &app; !sub->get_subcommands().empty();) {
        sub = sub->get_subcommands().front();
        active += sub->get_name() + ".";
    }
    std::vector<std::string> resolved;
    std::istringstream config(app.config_to_str(true, false));
    for (std::string line; std::getline(config, line);) {
        if (line.empty() || line.front() == '[') continue;
        const std::string key = line.substr(0, line.find('='));
        if (key.find('.') == std::string::npos || line.rfind(active, 0) == 0) resolved.push_back(line);
    }
    err << "# totcurv";
    for (const auto& a : args) err << ' ' << a;
    err << '\n';
    // File headers omit output destinations so identical runs write identical files.
    static const std::set<std::string> destinations{"out", "out-dir", "csv", "ply", "gt-csv"};
    for (const auto& line : resolved) {
        err << "# " << line << '\n';
        std::string key = line.substr(0, line.find('='));
        key.erase(key.find_last_not_of(' ') + 1);
        if (!destinations.count(key.substr(key.rfind('.') + 1))) ctx.header.push_back(line);
    }

    try {
        return action ? action() : kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitPipeline;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitPipeline;
    }
}

} // namespace totcurv
