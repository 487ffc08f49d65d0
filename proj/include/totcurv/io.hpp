#pragma once

#include <totcurv/geometry.hpp>
#include <totcurv/shapes.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace totcurv {

using Rgb = std::array<std::uint8_t, 3>;

// ---- OBJ (v / vn / f subset) ----

/// Polygons are fan-triangulated; `vn` references become vertex normals
/// (normalized) when every vertex receives one. Throws ParseError / IoError.
TriangleMesh read_obj(const std::filesystem::path& path);

/// Coordinates with 9 significant digits; writes vn records when the mesh
/// has normals. `comments` become leading '#' lines.
void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh,
               const std::vector<std::string>& comments = {});

// ---- PLY (ASCII and binary little endian) ----

struct PlyPayload {
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;   // optional
    std::vector<double> quality; // optional per-vertex scalar
    std::vector<Rgb> colors;     // optional
    std::vector<Face> faces;     // optional
    std::vector<std::string> comments; // header comment lines
};

enum class PlyFormat { Ascii, BinaryLittleEndian };

/// Unknown elements are skipped and reported in `warnings`.
/// Throws ParseError / IoError.
PlyPayload read_ply(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
void write_ply(const std::filesystem::path& path, const PlyPayload& payload,
               PlyFormat format = PlyFormat::BinaryLittleEndian);

TriangleMesh mesh_from_ply(const PlyPayload& payload);

// ---- XYZ (x y z [nx ny nz] per line) ----

PointCloud read_xyz(const std::filesystem::path& path);
void write_xyz(const std::filesystem::path& path, const PointCloud& cloud);

/// Dispatches on extension: .ply, .xyz / .txt.
PointCloud read_point_cloud(const std::filesystem::path& path);
TriangleMesh read_mesh(const std::filesystem::path& path); // .obj or .ply

// ---- surface sidecar (uv + generating surface, JSON) ----

std::filesystem::path sidecar_path(const std::filesystem::path& mesh_path);
void write_surface_sidecar(const std::filesystem::path& path, const ParametricSurface& surface,
                           const std::vector<Vec2>& uv);
struct SurfaceSidecar {
    ParametricSurface surface;
    std::vector<Vec2> uv;
};
std::optional<SurfaceSidecar> read_surface_sidecar(const std::filesystem::path& path);

// ---- colors ----

/// Fixed 256-entry blue -> white -> red table.
const std::array<Rgb, 256>& colormap_table();

/// Clips to the [lo_pct, hi_pct] percentiles (linear interpolation) and maps
/// linearly onto the table with index floor(255 * t). Constant input maps to
/// entry 127. Throws EmptyInput / InvalidArgument.
std::vector<Rgb> colorize(const std::vector<double>& values, double lo_pct = 0.0,
                          double hi_pct = 100.0);

// ---- CSV ----

struct CsvTable {
    std::vector<std::string> comments; // written as leading '#' lines, skipped on read
    std::vector<std::string> header;   // first column is the id
    std::vector<std::pair<long, std::vector<double>>> rows;

    /// Index of a value column (0 = first column after the id), or -1.
    int value_column(const std::string& name) const;
};

/// Six significant digits, '.' decimal point regardless of locale, rows
/// sorted by id. Throws IoError.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// %.6g, locale independent.
std::string format_number(double value, int significant = 6);

} // namespace totcurv
