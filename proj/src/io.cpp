#include <totcurv/io.hpp>

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace totcurv {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_error(const fs::path& path, std::size_t line, const std::string& what)
{
    throw Error(ErrorCode::ParseError, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in)
{
    std::ifstream in(path, mode);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out)
{
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
    return out;
}

void finish(std::ofstream& out, const fs::path& path)
{
    out.flush();
    if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

bool parse_double(std::string_view s, double& out)
{
    // from_chars rejects a leading '+', which some writers emit
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_long(std::string_view s, long& out)
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

std::string fmt9(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

std::string fmt17(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void fan(const std::vector<int>& poly, std::vector<Face>& faces)
{
    for (std::size_t k = 1; k + 1 < poly.size(); ++k) faces.push_back({poly[0], poly[k], poly[k + 1]});
}

} // namespace

// ---------------------------------------------------------------- OBJ

TriangleMesh read_obj(const fs::path& path)
{
    auto in = open_in(path);
    TriangleMesh mesh;
    std::vector<Vec3> vn;
    std::vector<int> normal_of; // per vertex index into vn, -1 if none
    std::string line;
    std::size_t lineno = 0;

    auto resolve = [&](std::string_view tok, std::size_t count) {
        long idx = 0;
        if (!parse_long(tok, idx) || idx == 0) parse_error(path, lineno, "bad index '" + std::string(tok) + "'");
        const long resolved = idx > 0 ? idx - 1 : static_cast<long>(count) + idx;
        if (resolved < 0 || resolved >= static_cast<long>(count)) {
            parse_error(path, lineno, "index " + std::to_string(idx) + " out of range");
        }
        return static_cast<int>(resolved);
    };

    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = split_ws(line);
        if (tok.empty() || tok[0].front() == '#') continue;
        if (tok[0] == "v" || tok[0] == "vn") {
            if (tok.size() < 4) parse_error(path, lineno, "expected three coordinates");
            Vec3 p;
            for (int k = 0; k < 3; ++k) {
                if (!parse_double(tok[k + 1], p[k])) parse_error(path, lineno, "bad number");
            }
            if (tok[0] == "v") {
                mesh.vertices.push_back(p);
                normal_of.push_back(-1);
            } else {
                vn.push_back(p);
            }
        } else if (tok[0] == "f") {
            if (tok.size() < 4) parse_error(path, lineno, "face needs at least three corners");
            std::vector<int> poly;
            for (std::size_t k = 1; k < tok.size(); ++k) {
                const std::string_view corner = tok[k];
                const auto slash = corner.find('/');
                const int v = resolve(corner.substr(0, slash), mesh.vertices.size());
                poly.push_back(v);
                if (slash == std::string_view::npos) continue;
                const auto slash2 = corner.find('/', slash + 1);
                if (slash2 == std::string_view::npos) continue;
                const auto ntok = corner.substr(slash2 + 1);
                if (!ntok.empty()) normal_of[v] = resolve(ntok, vn.size());
            }
            fan(poly, mesh.faces);
        }
        // vt, o, g, s, usemtl, mtllib: ignored
    }
    if (!vn.empty() && std::all_of(normal_of.begin(), normal_of.end(), [](int i) { return i >= 0; })) {
        mesh.vertex_normals.reserve(normal_of.size());
        for (int i : normal_of) mesh.vertex_normals.push_back(vn[i].normalized());
    }
    try {
        mesh.validate();
    } catch (const Error& e) {
        parse_error(path, lineno, e.what());
    }
    return mesh;
}

void write_obj(const fs::path& path, const TriangleMesh& mesh, const std::vector<std::string>& comments)
{
    auto out = open_out(path);
    for (const auto& c : comments) out << "# " << c << '\n';
    for (const Vec3& v : mesh.vertices) {
        out << "v " << fmt9(v.x()) << ' ' << fmt9(v.y()) << ' ' << fmt9(v.z()) << '\n';
    }
    const bool normals = mesh.has_normals();
    for (const Vec3& n : mesh.vertex_normals) {
        out << "vn " << fmt9(n.x()) << ' ' << fmt9(n.y()) << ' ' << fmt9(n.z()) << '\n';
    }
    for (const Face& f : mesh.faces) {
        out << 'f';
        for (int v : f) {
            out << ' ' << v + 1;
            if (normals) out << "//" << v + 1;
        }
        out << '\n';
    }
    finish(out, path);
}

// ---------------------------------------------------------------- PLY

namespace {

enum class PlyType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

PlyType ply_type(std::string_view name, const fs::path& path, std::size_t line)
{
    static const std::map<std::string_view, PlyType> types{
        {"char", PlyType::Int8},     {"int8", PlyType::Int8},       {"uchar", PlyType::UInt8},
        {"uint8", PlyType::UInt8},   {"short", PlyType::Int16},     {"int16", PlyType::Int16},
        {"ushort", PlyType::UInt16}, {"uint16", PlyType::UInt16},   {"int", PlyType::Int32},
        {"int32", PlyType::Int32},   {"uint", PlyType::UInt32},     {"uint32", PlyType::UInt32},
        {"float", PlyType::Float32}, {"float32", PlyType::Float32}, {"double", PlyType::Float64},
        {"float64", PlyType::Float64}};
    auto it = types.find(name);
    if (it == types.end()) parse_error(path, line, "unknown property type '" + std::string(name) + "'");
    return it->second;
}

std::size_t type_size(PlyType t)
{
    switch (t) {
    case PlyType::Int8:
    case PlyType::UInt8: return 1;
    case PlyType::Int16:
    case PlyType::UInt16: return 2;
    case PlyType::Int32:
    case PlyType::UInt32:
    case PlyType::Float32: return 4;
    case PlyType::Float64: return 8;
    }
    return 0;
}

struct PlyProperty {
    std::string name;
    PlyType type = PlyType::Float32;
    bool is_list = false;
    PlyType count_type = PlyType::UInt8;
};

struct PlyElement {
    std::string name;
    std::size_t count = 0;
    std::vector<PlyProperty> props;
};

template <typename T>
T load_le(const char* p)
{
    T v;
    std::memcpy(&v, p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) {
        auto* b = reinterpret_cast<unsigned char*>(&v);
        std::reverse(b, b + sizeof(T));
    }
    return v;
}

template <typename T>
void store_le(std::string& buf, T v)
{
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big && sizeof(T) > 1) std::reverse(b, b + sizeof(T));
    buf.append(b, sizeof(T));
}

// Sequential reader over either the ASCII token stream or the binary body.
class PlyReader {
public:
    PlyReader(std::string body, bool binary, const fs::path& path)
        : body_(std::move(body)), binary_(binary), path_(path)
    {}

    double read(PlyType t)
    {
        if (!binary_) {
            const std::string_view tok = next_token();
            double v = 0.0;
            if (!parse_double(tok, v)) fail("bad number '" + std::string(tok) + "'");
            return v;
        }
        const std::size_t n = type_size(t);
        if (pos_ + n > body_.size()) fail("unexpected end of binary data");
        const char* p = body_.data() + pos_;
        pos_ += n;
        switch (t) {
        case PlyType::Int8: return load_le<std::int8_t>(p);
        case PlyType::UInt8: return load_le<std::uint8_t>(p);
        case PlyType::Int16: return load_le<std::int16_t>(p);
        case PlyType::UInt16: return load_le<std::uint16_t>(p);
        case PlyType::Int32: return load_le<std::int32_t>(p);
        case PlyType::UInt32: return load_le<std::uint32_t>(p);
        case PlyType::Float32: return load_le<float>(p);
        case PlyType::Float64: return load_le<double>(p);
        }
        return 0.0;
    }

    std::size_t remaining() const { return body_.size() - pos_; }
    bool binary() const { return binary_; }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorCode::ParseError, path_.string() + ": " + what);
    }

private:
    std::string_view next_token()
    {
        while (pos_ < body_.size() && std::isspace(static_cast<unsigned char>(body_[pos_]))) ++pos_;
        const std::size_t start = pos_;
        while (pos_ < body_.size() && !std::isspace(static_cast<unsigned char>(body_[pos_]))) ++pos_;
        if (start == pos_) fail("unexpected end of ASCII data");
        return std::string_view(body_).substr(start, pos_ - start);
    }

    std::string body_;
    bool binary_;
    std::size_t pos_ = 0;
    fs::path path_;
};

} // namespace

PlyPayload read_ply(const fs::path& path, std::vector<std::string>* warnings)
{
    auto in = open_in(path, std::ios::binary);
    std::string line;
    std::size_t lineno = 0;
    auto getline = [&]() {
        if (!std::getline(in, line)) parse_error(path, lineno, "truncated header");
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
    };

    getline();
    if (line != "ply") parse_error(path, lineno, "missing 'ply' magic");
    bool binary = false;
    std::vector<PlyElement> elements;
    std::vector<std::string> out_comments;
    for (;;) {
        getline();
        const auto tok = split_ws(line);
        if (tok.empty()) continue;
        if (tok[0] == "end_header") break;
        if (tok[0] == "comment") {
            out_comments.push_back(line.size() > 8 ? line.substr(8) : std::string());
            continue;
        }
        if (tok[0] == "obj_info") continue;
        if (tok[0] == "format") {
            if (tok.size() < 2) parse_error(path, lineno, "bad format line");
            if (tok[1] == "ascii") {
                binary = false;
            } else if (tok[1] == "binary_little_endian") {
                binary = true;
            } else {
                parse_error(path, lineno, "unsupported format '" + std::string(tok[1]) + "'");
            }
        } else if (tok[0] == "element") {
            long count = 0;
            if (tok.size() != 3 || !parse_long(tok[2], count) || count < 0) {
                parse_error(path, lineno, "bad element line");
            }
            elements.push_back({std::string(tok[1]), static_cast<std::size_t>(count), {}});
        } else if (tok[0] == "property") {
            if (elements.empty()) parse_error(path, lineno, "property before element");
            PlyProperty prop;
            if (tok.size() == 5 && tok[1] == "list") {
                prop.is_list = true;
                prop.count_type = ply_type(tok[2], path, lineno);
                prop.type = ply_type(tok[3], path, lineno);
                prop.name = tok[4];
            } else if (tok.size() == 3) {
                prop.type = ply_type(tok[1], path, lineno);
                prop.name = tok[2];
            } else {
                parse_error(path, lineno, "bad property line");
            }
            elements.back().props.push_back(prop);
        } else {
            parse_error(path, lineno, "unexpected header line '" + line + "'");
        }
    }

    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    PlyReader reader(std::move(body), binary, path);
    PlyPayload out;
    out.comments = std::move(out_comments);

    for (const PlyElement& el : elements) {
        // fixed-size records must fit in what is left of the file
        std::size_t min_record = 0;
        for (const auto& p : el.props) min_record += p.is_list ? type_size(p.count_type) : type_size(p.type);
        const std::size_t min_bytes = el.props.empty() ? 0 : (binary ? min_record : 2 * el.props.size() - 1);
        if (min_bytes > 0 && el.count > reader.remaining() / min_bytes) {
            reader.fail("element '" + el.name + "' count " + std::to_string(el.count) +
                        " exceeds the file size");
        }

        if (el.name == "vertex") {
            auto idx = [&](const char* name) {
                for (std::size_t i = 0; i < el.props.size(); ++i) {
                    if (el.props[i].name == name && !el.props[i].is_list) return static_cast<int>(i);
                }
                return -1;
            };
            const int ix = idx("x"), iy = idx("y"), iz = idx("z");
            if (ix < 0 || iy < 0 || iz < 0) reader.fail("vertex element lacks x/y/z");
            const int inx = idx("nx"), iny = idx("ny"), inz = idx("nz");
            const bool has_n = inx >= 0 && iny >= 0 && inz >= 0;
            const int iq = idx("quality") >= 0 ? idx("quality") : idx("scalar_quality");
            const int ir = idx("red"), ig = idx("green"), ib = idx("blue");
            const bool has_c = ir >= 0 && ig >= 0 && ib >= 0;
            std::vector<double> rec(el.props.size());
            for (std::size_t v = 0; v < el.count; ++v) {
                for (std::size_t p = 0; p < el.props.size(); ++p) {
                    if (el.props[p].is_list) {
                        const auto n = static_cast<std::size_t>(reader.read(el.props[p].count_type));
                        for (std::size_t k = 0; k < n; ++k) reader.read(el.props[p].type);
                        rec[p] = 0.0;
                    } else {
                        rec[p] = reader.read(el.props[p].type);
                    }
                }
                out.positions.emplace_back(rec[ix], rec[iy], rec[iz]);
                if (has_n) out.normals.emplace_back(rec[inx], rec[iny], rec[inz]);
                if (iq >= 0) out.quality.push_back(rec[iq]);
                if (has_c) {
                    out.colors.push_back({static_cast<std::uint8_t>(rec[ir]), static_cast<std::uint8_t>(rec[ig]),
                                          static_cast<std::uint8_t>(rec[ib])});
                }
            }
        } else if (el.name == "face") {
            int list = -1;
            for (std::size_t i = 0; i < el.props.size(); ++i) {
                if (el.props[i].is_list &&
                    (el.props[i].name == "vertex_indices" || el.props[i].name == "vertex_index")) {
                    list = static_cast<int>(i);
                }
            }
            if (list < 0) reader.fail("face element lacks vertex_indices");
            for (std::size_t f = 0; f < el.count; ++f) {
                for (std::size_t p = 0; p < el.props.size(); ++p) {
                    if (!el.props[p].is_list) {
                        reader.read(el.props[p].type);
                        continue;
                    }
                    const double n = reader.read(el.props[p].count_type);
                    if (n < 0 || n > 1e6) reader.fail("bad face list length");
                    std::vector<int> poly;
                    for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
                        poly.push_back(static_cast<int>(reader.read(el.props[p].type)));
                    }
                    if (static_cast<int>(p) != list) continue;
                    if (poly.size() < 3) reader.fail("face with fewer than three corners");
                    fan(poly, out.faces);
                }
            }
        } else {
            if (warnings) warnings->push_back("skipped unsupported element '" + el.name + "'");
            for (std::size_t r = 0; r < el.count; ++r) {
                for (const auto& p : el.props) {
                    if (p.is_list) {
                        const auto n = static_cast<std::size_t>(reader.read(p.count_type));
                        for (std::size_t k = 0; k < n; ++k) reader.read(p.type);
                    } else {
                        reader.read(p.type);
                    }
                }
            }
        }
    }
    for (const Face& f : out.faces) {
        for (int v : f) {
            if (v < 0 || static_cast<std::size_t>(v) >= out.positions.size()) {
                reader.fail("face index " + std::to_string(v) + " out of range");
            }
        }
    }
    return out;
}

void write_ply(const fs::path& path, const PlyPayload& payload, PlyFormat format)
{
    const std::size_t n = payload.positions.size();
    const bool has_n = !payload.normals.empty();
    const bool has_q = !payload.quality.empty();
    const bool has_c = !payload.colors.empty();
    if ((has_n && payload.normals.size() != n) || (has_q && payload.quality.size() != n) ||
        (has_c && payload.colors.size() != n)) {
        throw Error(ErrorCode::SizeMismatch, "PLY attribute counts differ from the vertex count");
    }

    std::ostringstream header;
    header << "ply\nformat " << (format == PlyFormat::Ascii ? "ascii" : "binary_little_endian")
           << " 1.0\n";
    for (const auto& c : payload.comments) header << "comment " << c << '\n';
    header << "element vertex " << n << "\n"
           << "property double x\nproperty double y\nproperty double z\n";
    if (has_n) header << "property double nx\nproperty double ny\nproperty double nz\n";
    if (has_q) header << "property double quality\n";
    if (has_c) header << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    if (!payload.faces.empty()) {
        header << "element face " << payload.faces.size() << "\nproperty list uchar int vertex_indices\n";
    }
    header << "end_header\n";

    auto out = open_out(path, std::ios::binary);
    out << header.str();
    if (format == PlyFormat::Ascii) {
        for (std::size_t i = 0; i < n; ++i) {
            const Vec3& p = payload.positions[i];
            out << fmt17(p.x()) << ' ' << fmt17(p.y()) << ' ' << fmt17(p.z());
            if (has_n) {
                const Vec3& q = payload.normals[i];
                out << ' ' << fmt17(q.x()) << ' ' << fmt17(q.y()) << ' ' << fmt17(q.z());
            }
            if (has_q) out << ' ' << fmt17(payload.quality[i]);
            if (has_c) {
                for (auto c : payload.colors[i]) out << ' ' << static_cast<int>(c);
            }
            out << '\n';
        }
        for (const Face& f : payload.faces) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
    } else {
        std::string buf;
        for (std::size_t i = 0; i < n; ++i) {
            for (int k = 0; k < 3; ++k) store_le(buf, payload.positions[i][k]);
            if (has_n) {
                for (int k = 0; k < 3; ++k) store_le(buf, payload.normals[i][k]);
            }
            if (has_q) store_le(buf, payload.quality[i]);
            if (has_c) {
                for (auto c : payload.colors[i]) store_le(buf, c);
            }
        }
        for (const Face& f : payload.faces) {
            store_le<std::uint8_t>(buf, 3);
            for (int v : f) store_le<std::int32_t>(buf, v);
        }
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    }
    finish(out, path);
}

TriangleMesh mesh_from_ply(const PlyPayload& payload)
{
    TriangleMesh mesh;
    mesh.vertices = payload.positions;
    mesh.faces = payload.faces;
    if (!payload.normals.empty()) {
        for (const Vec3& n : payload.normals) mesh.vertex_normals.push_back(n.normalized());
    }
    mesh.validate();
    return mesh;
}

// ---------------------------------------------------------------- XYZ

PointCloud read_xyz(const fs::path& path)
{
    auto in = open_in(path);
    PointCloud cloud;
    std::string line;
    std::size_t lineno = 0;
    int columns = -1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = split_ws(line);
        if (tok.empty() || tok[0].front() == '#') continue;
        if (tok.size() != 3 && tok.size() != 6) parse_error(path, lineno, "expected 3 or 6 columns");
        if (columns < 0) columns = static_cast<int>(tok.size());
        if (static_cast<int>(tok.size()) != columns) parse_error(path, lineno, "column count changed");
        double v[6];
        for (std::size_t k = 0; k < tok.size(); ++k) {
            if (!parse_double(tok[k], v[k])) parse_error(path, lineno, "bad number");
        }
        cloud.points.emplace_back(v[0], v[1], v[2]);
        if (columns == 6) cloud.normals.push_back(Vec3(v[3], v[4], v[5]).normalized());
    }
    return cloud;
}

void write_xyz(const fs::path& path, const PointCloud& cloud)
{
    auto out = open_out(path);
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        const Vec3& p = cloud.points[i];
        out << fmt17(p.x()) << ' ' << fmt17(p.y()) << ' ' << fmt17(p.z());
        if (cloud.has_normals()) {
            const Vec3& n = cloud.normals[i];
            out << ' ' << fmt17(n.x()) << ' ' << fmt17(n.y()) << ' ' << fmt17(n.z());
        }
        out << '\n';
    }
    finish(out, path);
}

PointCloud read_point_cloud(const fs::path& path)
{
    const std::string ext = path.extension().string();
    if (ext == ".ply") {
        PlyPayload ply = read_ply(path);
        PointCloud cloud;
        cloud.points = std::move(ply.positions);
        for (const Vec3& n : ply.normals) cloud.normals.push_back(n.normalized());
        return cloud;
    }
    return read_xyz(path);
}

TriangleMesh read_mesh(const fs::path& path)
{
    if (path.extension() == ".ply") return mesh_from_ply(read_ply(path));
    return read_obj(path);
}

// ---------------------------------------------------------------- sidecar

fs::path sidecar_path(const fs::path& mesh_path)
{
    fs::path p = mesh_path;
    p.replace_extension(".surface.json");
    return p;
}

void write_surface_sidecar(const fs::path& path, const ParametricSurface& surface,
                           const std::vector<Vec2>& uv)
{
    nlohmann::json j;
    switch (surface.kind()) {
    case ParametricSurface::Kind::Sphere:
        j["kind"] = "sphere";
        j["radius"] = surface.radius();
        break;
    case ParametricSurface::Kind::Torus:
        j["kind"] = "torus";
        j["R"] = surface.radius();
        j["r"] = surface.minor_radius();
        break;
    case ParametricSurface::Kind::Tube:
        j["kind"] = "tube";
        j["tube_radius"] = surface.radius();
        j["curve"] = surface.curve().kind == KnotCurve::Kind::FigureEight ? "fig8" : "torus_knot";
        j["p"] = surface.curve().p;
        j["q"] = surface.curve().q;
        break;
    }
    auto& arr = j["uv"] = nlohmann::json::array();
    for (const Vec2& t : uv) arr.push_back({t.x(), t.y()});
    auto out = open_out(path);
    out << j.dump() << '\n';
    finish(out, path);
}

std::optional<SurfaceSidecar> read_surface_sidecar(const fs::path& path)
{
    if (!fs::exists(path)) return std::nullopt;
    auto in = open_in(path);
    try {
        const nlohmann::json j = nlohmann::json::parse(in);
        const std::string kind = j.at("kind");
        std::optional<ParametricSurface> surface;
        if (kind == "sphere") {
            surface = ParametricSurface::sphere(j.at("radius"));
        } else if (kind == "torus") {
            surface = ParametricSurface::torus(j.at("R"), j.at("r"));
        } else if (kind == "tube") {
            const KnotCurve curve = j.at("curve") == "fig8"
                                        ? KnotCurve::figure_eight()
                                        : KnotCurve::torus_knot(j.at("p"), j.at("q"));
            surface = ParametricSurface::tube(curve, j.at("tube_radius"));
        } else {
            throw Error(ErrorCode::ParseError, path.string() + ": unknown surface kind " + kind);
        }
        SurfaceSidecar out{*surface, {}};
        for (const auto& t : j.at("uv")) out.uv.emplace_back(t.at(0).get<double>(), t.at(1).get<double>());
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
}

// ---------------------------------------------------------------- colors

const std::array<Rgb, 256>& colormap_table()
{
    static const std::array<Rgb, 256> table = [] {
        std::array<Rgb, 256> t{};
        for (int i = 0; i < 256; ++i) {
            const double x = i / 255.0;
            if (x < 0.5) {
                const auto s = static_cast<std::uint8_t>(std::lround(255.0 * x / 0.5));
                t[i] = {s, s, 255};
            } else {
                const auto s = static_cast<std::uint8_t>(std::lround(255.0 * (1.0 - (x - 0.5) / 0.5)));
                t[i] = {255, s, s};
            }
        }
        return t;
    }();
    return table;
}

std::vector<Rgb> colorize(const std::vector<double>& values, double lo_pct, double hi_pct)
{
    if (values.empty()) throw Error(ErrorCode::EmptyInput, "no values to colorize");
    if (!(lo_pct >= 0.0 && lo_pct < hi_pct && hi_pct <= 100.0)) {
        throw Error(ErrorCode::InvalidArgument, "need 0 <= lo < hi <= 100");
    }
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    auto percentile = [&](double pct) {
        const double pos = pct / 100.0 * static_cast<double>(sorted.size() - 1);
        const auto i = static_cast<std::size_t>(std::floor(pos));
        const std::size_t j = std::min(i + 1, sorted.size() - 1);
        return sorted[i] + (pos - static_cast<double>(i)) * (sorted[j] - sorted[i]);
    };
    const double lo = percentile(lo_pct);
    const double hi = percentile(hi_pct);
    const auto& table = colormap_table();
    std::vector<Rgb> out;
    out.reserve(values.size());
    for (double v : values) {
        if (!(hi > lo)) {
            out.push_back(table[127]);
            continue;
        }
        const double t = (std::clamp(v, lo, hi) - lo) / (hi - lo);
        out.push_back(table[std::clamp(static_cast<int>(std::floor(255.0 * t)), 0, 255)]);
    }
    return out;
}

// ---------------------------------------------------------------- CSV

std::string format_number(double value, int significant)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

int CsvTable::value_column(const std::string& name) const
{
    for (std::size_t i = 1; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i - 1);
    }
    return -1;
}

void write_csv(const fs::path& path, const CsvTable& table)
{
    auto rows = table.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    auto out = open_out(path);
    for (const auto& c : table.comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& [id, values] : rows) {
        out << id;
        for (double v : values) out << ',' << format_number(v);
        out << '\n';
    }
    finish(out, path);
}

CsvTable read_csv(const fs::path& path)
{
    auto in = open_in(path);
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            if (table.header.empty()) table.comments.push_back(line.size() > 2 ? line.substr(2) : std::string());
            continue;
        }
        const auto cells = split(line);
        if (table.header.empty()) {
            table.header = cells;
            continue;
        }
        if (cells.size() != table.header.size()) parse_error(path, lineno, "column count differs from header");
        long id = 0;
        if (!parse_long(cells[0], id)) parse_error(path, lineno, "bad id");
        std::vector<double> values(cells.size() - 1);
        for (std::size_t k = 1; k < cells.size(); ++k) {
            if (!parse_double(cells[k], values[k - 1])) parse_error(path, lineno, "bad number");
        }
        table.rows.emplace_back(id, std::move(values));
    }
    if (table.header.empty()) parse_error(path, lineno, "missing header");
    return table;
}

} // namespace totcurv
