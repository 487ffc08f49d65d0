#include <totcurv/shapes.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <string>

namespace totcurv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kFrameSamples = 8192;

// Rotates v about the unit axis k by angle (Rodrigues).
Vec3 rotate(const Vec3& v, const Vec3& k, double angle)
{
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return v * c + k.cross(v) * s + k * k.dot(v) * (1.0 - c);
}

// Minimal rotation taking unit `from` to unit `to`, applied to v.
Vec3 transport(const Vec3& v, const Vec3& from, const Vec3& to)
{
    const Vec3 axis = from.cross(to);
    const double s = axis.norm();
    const double c = from.dot(to);
    if (s < 1e-15) return v;
    return rotate(v, axis / s, std::atan2(s, c));
}

double wrap_period(double x)
{
    x = std::fmod(x, kTwoPi);
    return x < 0.0 ? x + kTwoPi : x;
}

struct RadialForm {
    double a, b, c, zsign;
};

RadialForm radial_form(const KnotCurve& k)
{
    if (k.kind == KnotCurve::Kind::FigureEight) return {2.0, 3.0, 4.0, 1.0};
    return {static_cast<double>(k.q), static_cast<double>(k.p), static_cast<double>(k.q), -1.0};
}

} // namespace

Vec3 KnotCurve::position(double t) const
{
    const auto [a, b, c, zs] = radial_form(*this);
    const double rho = 2.0 + std::cos(a * t);
    return {rho * std::cos(b * t), rho * std::sin(b * t), zs * std::sin(c * t)};
}

Vec3 KnotCurve::d1(double t) const
{
    const auto [a, b, c, zs] = radial_form(*this);
    const double rho = 2.0 + std::cos(a * t);
    const double drho = -a * std::sin(a * t);
    const double cb = std::cos(b * t), sb = std::sin(b * t);
    return {drho * cb - b * rho * sb, drho * sb + b * rho * cb, zs * c * std::cos(c * t)};
}

Vec3 KnotCurve::d2(double t) const
{
    const auto [a, b, c, zs] = radial_form(*this);
    const double rho = 2.0 + std::cos(a * t);
    const double drho = -a * std::sin(a * t);
    const double ddrho = -a * a * std::cos(a * t);
    const double cb = std::cos(b * t), sb = std::sin(b * t);
    return {ddrho * cb - 2.0 * b * drho * sb - b * b * rho * cb,
            ddrho * sb + 2.0 * b * drho * cb - b * b * rho * sb, -zs * c * c * std::sin(c * t)};
}

Vec3 KnotCurve::curvature_vector(double t) const
{
    const Vec3 v = d1(t);
    const Vec3 acc = d2(t);
    const double speed2 = v.squaredNorm();
    return v.cross(acc).cross(v) / (speed2 * speed2);
}

std::string KnotCurve::name() const
{
    if (kind == Kind::FigureEight) return "fig8";
    return "torus" + std::to_string(p) + std::to_string(q);
}

// Rotation-minimizing normals sampled along the curve. The transport
// holonomy is spread as a uniform twist so the frame closes at t = 2pi.
struct ParametricSurface::TubeFrames {
    std::vector<Vec3> tangent;
    std::vector<Vec3> normal; // transported, without the closing twist
    double holonomy = 0.0;
};

ParametricSurface ParametricSurface::sphere(double radius)
{
    if (!(radius > 0.0)) throw Error(ErrorCode::InvalidRadii, "sphere radius must be positive");
    ParametricSurface s;
    s.kind_ = Kind::Sphere;
    s.a_ = radius;
    return s;
}

ParametricSurface ParametricSurface::torus(double R, double r)
{
    if (!(R > r && r > 0.0)) {
        throw Error(ErrorCode::InvalidRadii, "torus needs R > r > 0");
    }
    ParametricSurface s;
    s.kind_ = Kind::Torus;
    s.a_ = R;
    s.b_ = r;
    return s;
}

ParametricSurface ParametricSurface::tube(const KnotCurve& curve, double tube_radius)
{
    if (!(tube_radius > 0.0)) throw Error(ErrorCode::InvalidRadii, "tube radius must be positive");
    if (curve.kind == KnotCurve::Kind::TorusKnot &&
        (curve.p < 1 || curve.q < 0 || std::gcd(curve.p, curve.q) != 1)) {
        throw Error(ErrorCode::InvalidArgument, "torus knot needs p >= 1, q >= 0, gcd(p, q) = 1");
    }
    ParametricSurface s;
    s.kind_ = Kind::Tube;
    s.a_ = tube_radius;
    s.curve_ = curve;

    auto frames = std::make_shared<TubeFrames>();
    frames->tangent.resize(kFrameSamples + 1);
    frames->normal.resize(kFrameSamples + 1);
    double max_curvature = 0.0;
    Vec3 centroid = Vec3::Zero();
    for (int i = 0; i <= kFrameSamples; ++i) {
        const double t = kTwoPi * i / kFrameSamples;
        frames->tangent[i] = curve.d1(t).normalized();
        max_curvature = std::max(max_curvature, curve.curvature_vector(t).norm());
        if (i < kFrameSamples) centroid += curve.position(t);
    }
    centroid /= kFrameSamples;
    if (tube_radius * max_curvature >= 1.0) {
        throw Error(ErrorCode::SelfIntersectingTube,
                    "tube radius " + std::to_string(tube_radius) + " exceeds the curvature radius " +
                        std::to_string(1.0 / max_curvature));
    }

    const Vec3& t0 = frames->tangent[0];
    Vec3 n0 = curve.position(0.0) - centroid;
    n0 -= n0.dot(t0) * t0;
    if (n0.norm() < 1e-9) {
        int axis = 0;
        t0.cwiseAbs().minCoeff(&axis);
        n0 = Vec3::Unit(axis) - t0[axis] * t0;
    }
    frames->normal[0] = n0.normalized();
    for (int i = 1; i <= kFrameSamples; ++i) {
        Vec3 n = transport(frames->normal[i - 1], frames->tangent[i - 1], frames->tangent[i]);
        n -= n.dot(frames->tangent[i]) * frames->tangent[i];
        frames->normal[i] = n.normalized();
    }
    const Vec3& end = frames->normal[kFrameSamples];
    frames->holonomy = std::atan2(end.cross(frames->normal[0]).dot(t0), end.dot(frames->normal[0]));
    s.frames_ = std::move(frames);
    return s;
}

std::array<Vec3, 3> ParametricSurface::tube_frame(double t) const
{
    t = wrap_period(t);
    const double h = kTwoPi / kFrameSamples;
    const int i = std::min(kFrameSamples - 1, static_cast<int>(t / h));
    const Vec3 tangent = curve_.d1(t).normalized();
    Vec3 n = transport(frames_->normal[i], frames_->tangent[i], tangent);
    n = rotate(n, tangent, frames_->holonomy * t / kTwoPi);
    n = (n - n.dot(tangent) * tangent).normalized();
    return {tangent, n, n.cross(tangent)};
}

Vec3 ParametricSurface::position(double u, double v) const
{
    switch (kind_) {
    case Kind::Sphere:
        return a_ * Vec3(std::sin(v) * std::cos(u), std::sin(v) * std::sin(u), std::cos(v));
    case Kind::Torus: {
        const double ring = a_ + b_ * std::cos(v);
        return {ring * std::cos(u), ring * std::sin(u), b_ * std::sin(v)};
    }
    case Kind::Tube:
        return curve_.position(u) + a_ * normal(u, v);
    }
    return Vec3::Zero();
}

Vec3 ParametricSurface::normal(double u, double v) const
{
    switch (kind_) {
    case Kind::Sphere:
        return {std::sin(v) * std::cos(u), std::sin(v) * std::sin(u), std::cos(v)};
    case Kind::Torus:
        return {std::cos(v) * std::cos(u), std::cos(v) * std::sin(u), std::sin(v)};
    case Kind::Tube: {
        const auto frame = tube_frame(u);
        return (std::cos(v) * frame[1] + std::sin(v) * frame[2]).normalized();
    }
    }
    return Vec3::UnitZ();
}

std::pair<double, double> ParametricSurface::principal_curvatures(double u, double v) const
{
    switch (kind_) {
    case Kind::Sphere:
        return {1.0 / a_, 1.0 / a_};
    case Kind::Torus:
        return {std::cos(v) / (a_ + b_ * std::cos(v)), 1.0 / b_};
    case Kind::Tube: {
        // along the curve: -(K.d) / (1 - r K.d); around the tube: 1/r
        const double kd = curve_.curvature_vector(u).dot(normal(u, v));
        return {-kd / (1.0 - a_ * kd), 1.0 / a_};
    }
    }
    return {0.0, 0.0};
}

double ParametricSurface::density(double u, double v) const
{
    const auto [k1, k2] = principal_curvatures(u, v);
    return k1 * k1 + k2 * k2;
}

Vec2 ParametricSurface::period() const
{
    if (kind_ == Kind::Sphere) return {kTwoPi, 0.0};
    return {kTwoPi, kTwoPi};
}

SurfacePoint ParametricSurface::snap(const TriangleMesh& mesh, int face, const Vec3& bary) const
{
    const Face& f = mesh.faces.at(face);
    SurfacePoint out;
    if (kind_ == Kind::Sphere) {
        Vec3 p = Vec3::Zero();
        for (int k = 0; k < 3; ++k) p += bary[k] * mesh.vertices[f[k]];
        out.normal = p.normalized();
        out.position = a_ * out.normal;
        out.uv = {wrap_period(std::atan2(out.normal.y(), out.normal.x())),
                  std::acos(std::clamp(out.normal.z(), -1.0, 1.0))};
        out.density = density(out.uv.x(), out.uv.y());
        return out;
    }
    if (!mesh.has_uv()) throw Error(ErrorCode::MissingUV, "mesh has no vertex_uv");
    const Vec2 per = period();
    const Vec2 base = mesh.vertex_uv[f[0]];
    Vec2 uv = Vec2::Zero();
    for (int k = 0; k < 3; ++k) {
        Vec2 c = mesh.vertex_uv[f[k]];
        for (int d = 0; d < 2; ++d) {
            if (per[d] <= 0.0) continue;
            while (c[d] - base[d] > 0.5 * per[d]) c[d] -= per[d];
            while (c[d] - base[d] < -0.5 * per[d]) c[d] += per[d];
        }
        uv += bary[k] * c;
    }
    out.uv = uv;
    out.position = position(uv.x(), uv.y());
    out.normal = normal(uv.x(), uv.y());
    out.density = density(uv.x(), uv.y());
    return out;
}

TriangleMesh icosphere(int subdivisions, double radius)
{
    if (subdivisions < 0) throw Error(ErrorCode::InvalidArgument, "subdivisions must be >= 0");
    const double t = std::numbers::phi;
    TriangleMesh mesh;
    mesh.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                     {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                  {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                  {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                  {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (Vec3& v : mesh.vertices) v.normalize();

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int id = static_cast<int>(mesh.vertices.size());
            mesh.vertices.push_back((mesh.vertices[a] + mesh.vertices[b]).normalized());
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<Face> faces;
        faces.reserve(mesh.faces.size() * 4);
        for (const Face& f : mesh.faces) {
            const int ab = mid(f[0], f[1]);
            const int bc = mid(f[1], f[2]);
            const int ca = mid(f[2], f[0]);
            faces.push_back({f[0], ab, ca});
            faces.push_back({f[1], bc, ab});
            faces.push_back({f[2], ca, bc});
            faces.push_back({ab, bc, ca});
        }
        mesh.faces = std::move(faces);
    }

    mesh.vertex_normals = mesh.vertices;
    mesh.vertex_uv.reserve(mesh.vertices.size());
    for (Vec3& v : mesh.vertices) {
        mesh.vertex_uv.emplace_back(wrap_period(std::atan2(v.y(), v.x())),
                                    std::acos(std::clamp(v.z(), -1.0, 1.0)));
        v *= radius;
    }
    return mesh;
}

TriangleMesh periodic_grid(const ParametricSurface& surface, int nu, int nv)
{
    TriangleMesh mesh;
    mesh.vertices.reserve(static_cast<std::size_t>(nu) * nv);
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const double u = kTwoPi * i / nu;
            const double v = kTwoPi * j / nv;
            mesh.vertices.push_back(surface.position(u, v));
            mesh.vertex_normals.push_back(surface.normal(u, v));
            mesh.vertex_uv.emplace_back(u, v);
        }
    }
    auto id = [&](int i, int j) { return (i % nu) * nv + (j % nv); };
    mesh.faces.reserve(2 * mesh.vertices.size());
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    }
    return mesh;
}

TriangleMesh torus_grid(double R, double r, int nu, int nv)
{
    if (nu < 3 || nv < 3) throw Error(ErrorCode::InvalidArgument, "torus grid needs nu, nv >= 3");
    return periodic_grid(ParametricSurface::torus(R, r), nu, nv);
}

TriangleMesh tube_knot(const KnotCurve& curve, double r_tube, int nu, int nv)
{
    if (nu < 8 || nv < 8) throw Error(ErrorCode::InvalidArgument, "tube needs nu, nv >= 8");
    return periodic_grid(ParametricSurface::tube(curve, r_tube), nu, nv);
}

std::vector<Vec3> analytic_vertex_normals(const TriangleMesh& mesh,
                                          const ParametricSurface& surface)
{
    if (!mesh.has_uv()) throw Error(ErrorCode::MissingUV, "mesh has no vertex_uv");
    std::vector<Vec3> normals;
    normals.reserve(mesh.num_vertices());
    for (const Vec2& uv : mesh.vertex_uv) normals.push_back(surface.normal(uv.x(), uv.y()));
    return normals;
}

CurvatureField gt_per_triangle(const TriangleMesh& mesh, const ParametricSurface& surface)
{
    if (!mesh.has_uv()) throw Error(ErrorCode::MissingUV, "mesh has no vertex_uv");
    std::vector<double> density;
    density.reserve(mesh.num_vertices());
    for (const Vec2& uv : mesh.vertex_uv) density.push_back(surface.density(uv.x(), uv.y()));

    CurvatureField field;
    field.per_triangle.reserve(mesh.num_faces());
    for (const Face& f : mesh.faces) {
        const double area =
            triangle_area(mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]);
        field.per_triangle.push_back((density[f[0]] + density[f[1]] + density[f[2]]) / 3.0 * area);
    }
    field.per_vertex_density = std::move(density);
    return field;
}

} // namespace totcurv
