#include "cpdd/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cpdd/mesh_index.hpp"

namespace cpdd {

namespace {
constexpr double kMedialAxisRel = 1e-12;
}

// ---------------------------------------------------------------------------
// TriMesh

TriMesh::TriMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)) {
    const int nv = static_cast<int>(vertices_.size());
    for (const auto& t : triangles) {
        for (int v : t) {
            if (v < 0 || v >= nv) {
                throw Error(ErrorCode::bad_mesh_record, "triangle references invalid vertex " +
                                                            std::to_string(v));
            }
        }
    }
    // Zero-area triangles contribute nothing to the projection; drop them.
    bbox_min_ = bbox_max_ = vertices_.empty() ? Vec3{} : vertices_[0];
    for (const auto& v : vertices_) {
        bbox_min_ = {std::min(bbox_min_.x, v.x), std::min(bbox_min_.y, v.y), std::min(bbox_min_.z, v.z)};
        bbox_max_ = {std::max(bbox_max_.x, v.x), std::max(bbox_max_.y, v.y), std::max(bbox_max_.z, v.z)};
    }
    const double diag2 = (bbox_max_ - bbox_min_).squared_norm();
    triangles_.reserve(triangles.size());
    for (const auto& t : triangles) {
        Vec3 n = (vertices_[t[1]] - vertices_[t[0]]).cross(vertices_[t[2]] - vertices_[t[0]]);
        if (0.5 * n.norm() > 1e-14 * diag2) triangles_.push_back(t);
    }
    recompute_derived();
}

void TriMesh::scale_uniform(double factor) {
    if (!(factor > 0.0)) throw Error(ErrorCode::invalid_config, "mesh scale factor must be positive");
    for (auto& v : vertices_) v = v * factor;
    recompute_derived();
}

void TriMesh::scale_height_to(double height) {
    double extent = bbox_max_.y - bbox_min_.y;
    if (extent <= 0.0) throw Error(ErrorCode::empty_mesh, "mesh has no y-extent to scale");
    scale_uniform(height / extent);
}

void TriMesh::center_at_origin() {
    Vec3 c = (bbox_min_ + bbox_max_) * 0.5;
    for (auto& v : vertices_) v -= c;
    recompute_derived();
}

void TriMesh::recompute_derived() {
    bbox_min_ = bbox_max_ = vertices_.empty() ? Vec3{} : vertices_[0];
    for (const auto& v : vertices_) {
        bbox_min_ = {std::min(bbox_min_.x, v.x), std::min(bbox_min_.y, v.y), std::min(bbox_min_.z, v.z)};
        bbox_max_ = {std::max(bbox_max_.x, v.x), std::max(bbox_max_.y, v.y), std::max(bbox_max_.z, v.z)};
    }
    face_normals_.assign(triangles_.size(), Vec3{});
    vertex_normals_.assign(vertices_.size(), Vec3{});
    vertex_faces_.assign(vertices_.size(), {});
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        const Vec3 &a = vertices_[tri[0]], &b = vertices_[tri[1]], &c = vertices_[tri[2]];
        face_normals_[t] = (b - a).cross(c - a).normalized();
        for (int k = 0; k < 3; ++k) {
            vertex_faces_[tri[k]].push_back(static_cast<int>(t));
            const Vec3& p0 = vertices_[tri[k]];
            const Vec3& p1 = vertices_[tri[(k + 1) % 3]];
            const Vec3& p2 = vertices_[tri[(k + 2) % 3]];
            Vec3 e1 = (p1 - p0).normalized();
            Vec3 e2 = (p2 - p0).normalized();
            double angle = std::acos(std::clamp(e1.dot(e2), -1.0, 1.0));
            vertex_normals_[tri[k]] += angle * face_normals_[t];
        }
    }
    for (auto& n : vertex_normals_) {
        double len = n.norm();
        if (len > 0.0) n = n / len;
    }
}

Vec3 TriMesh::edge_pseudo_normal(int va, int vb) const {
    Vec3 sum{};
    for (int f : vertex_faces_[va]) {
        const auto& tri = triangles_[f];
        if (tri[0] == vb || tri[1] == vb || tri[2] == vb) sum += face_normals_[f];
    }
    double len = sum.norm();
    return len > 0.0 ? sum / len : Vec3{};
}

Vec3 TriMesh::pseudo_normal(int t, const Vec3& point_on_triangle) const {
    const auto& tri = triangles_[t];
    const Vec3 &a = vertices_[tri[0]], &b = vertices_[tri[1]], &c = vertices_[tri[2]];
    const Vec3 v0 = b - a, v1 = c - a, v2 = point_on_triangle - a;
    const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
    const double d20 = v2.dot(v0), d21 = v2.dot(v1);
    const double denom = d00 * d11 - d01 * d01;
    const double v = (d11 * d20 - d01 * d21) / denom;
    const double w = (d00 * d21 - d01 * d20) / denom;
    const double u = 1.0 - v - w;

    constexpr double eps = 1e-9;
    const bool on_u = u > eps, on_v = v > eps, on_w = w > eps;
    if (on_u && on_v && on_w) return face_normals_[t];
    if (on_u && on_v) return edge_pseudo_normal(tri[0], tri[1]);
    if (on_u && on_w) return edge_pseudo_normal(tri[0], tri[2]);
    if (on_v && on_w) return edge_pseudo_normal(tri[1], tri[2]);
    if (on_u) return vertex_normals_[tri[0]];
    if (on_v) return vertex_normals_[tri[1]];
    return vertex_normals_[tri[2]];
}

// ---------------------------------------------------------------------------
// Surface

Surface Surface::circle(const Vec3& center, double radius) {
    if (!(radius > 0.0)) throw Error(ErrorCode::invalid_config, "circle radius must be positive");
    Surface s(CircleShape{center, radius});
    s.curvature_bound_ = 1.0 / radius;
    return s;
}

Surface Surface::sphere(const Vec3& center, double radius) {
    if (!(radius > 0.0)) throw Error(ErrorCode::invalid_config, "sphere radius must be positive");
    Surface s(SphereShape{center, radius});
    s.curvature_bound_ = 1.0 / radius;
    return s;
}

Surface Surface::torus(const Vec3& center, double major_radius, double minor_radius) {
    if (!(major_radius > 0.0) || !(minor_radius > 0.0)) {
        throw Error(ErrorCode::invalid_config, "torus radii must be positive");
    }
    if (!(minor_radius < major_radius)) {
        throw Error(ErrorCode::invalid_config, "torus requires minor radius < major radius");
    }
    Surface s(TorusShape{center, major_radius, minor_radius});
    s.curvature_bound_ = std::max(1.0 / minor_radius, 1.0 / (major_radius - minor_radius));
    return s;
}

Surface Surface::mesh(TriMesh mesh) {
    auto m = std::make_shared<const TriMesh>(std::move(mesh));
    auto index = std::make_shared<const MeshIndex>(*m);
    return Surface(MeshShape{std::move(m), std::move(index)});
}

int Surface::dim() const { return std::holds_alternative<CircleShape>(shape_) ? 2 : 3; }

bool Surface::is_mesh() const { return std::holds_alternative<MeshShape>(shape_); }

const TriMesh& Surface::tri_mesh() const { return *std::get<MeshShape>(shape_).mesh; }

double Surface::scale() const {
    if (const auto* c = std::get_if<CircleShape>(&shape_)) return c->radius;
    if (const auto* s = std::get_if<SphereShape>(&shape_)) return s->radius;
    if (const auto* t = std::get_if<TorusShape>(&shape_)) return t->major_radius + t->minor_radius;
    return std::get<MeshShape>(shape_).mesh->bbox_diagonal();
}

Vec3 Surface::default_seed() const {
    if (const auto* c = std::get_if<CircleShape>(&shape_)) return c->center + Vec3{c->radius, 0, 0};
    if (const auto* s = std::get_if<SphereShape>(&shape_)) return s->center + Vec3{s->radius, 0, 0};
    if (const auto* t = std::get_if<TorusShape>(&shape_)) {
        return t->center + Vec3{t->major_radius + t->minor_radius, 0, 0};
    }
    return std::get<MeshShape>(shape_).mesh->vertices().front();
}

SurfaceQuery Surface::closest_point(const Vec3& x) const {
    SurfaceQuery q;
    q.query_point = x;

    if (const auto* c = std::get_if<CircleShape>(&shape_)) {
        Vec3 v{x.x - c->center.x, x.y - c->center.y, 0.0};
        double rho = v.norm();
        if (rho < kMedialAxisRel * c->radius) {
            throw Error(ErrorCode::medial_axis_point,
                        "query at circle center (grid spacing too coarse for surface curvature?)");
        }
        q.normal = v / rho;
        q.closest_point = c->center + q.normal * c->radius;
        q.distance = std::abs(rho - c->radius);
        return q;
    }
    if (const auto* s = std::get_if<SphereShape>(&shape_)) {
        Vec3 v = x - s->center;
        double rho = v.norm();
        if (rho < kMedialAxisRel * s->radius) {
            throw Error(ErrorCode::medial_axis_point,
                        "query at sphere center (grid spacing too coarse for surface curvature?)");
        }
        q.normal = v / rho;
        q.closest_point = s->center + q.normal * s->radius;
        q.distance = std::abs(rho - s->radius);
        return q;
    }
    if (const auto* t = std::get_if<TorusShape>(&shape_)) {
        Vec3 p = x - t->center;
        double rho = std::hypot(p.x, p.y);
        if (rho < kMedialAxisRel * t->major_radius) {
            throw Error(ErrorCode::medial_axis_point,
                        "query on torus axis (grid spacing too coarse for surface curvature?)");
        }
        Vec3 spine{t->major_radius * p.x / rho, t->major_radius * p.y / rho, 0.0};
        Vec3 w = p - spine;
        double wlen = w.norm();
        if (wlen < kMedialAxisRel * t->minor_radius) {
            throw Error(ErrorCode::medial_axis_point,
                        "query on torus spine circle (grid spacing too coarse for surface curvature?)");
        }
        q.normal = w / wlen;
        q.closest_point = t->center + spine + q.normal * t->minor_radius;
        q.distance = std::abs(wlen - t->minor_radius);
        return q;
    }

    const auto& ms = std::get<MeshShape>(shape_);
    MeshIndex::Hit hit = ms.index->closest(x);
    q.closest_point = hit.point;
    q.distance = (x - hit.point).norm();
    Vec3 pn = ms.mesh->pseudo_normal(hit.triangle, hit.point);
    if (mesh_normal_mode_ == MeshNormalMode::displacement &&
        q.distance > 1e-8 * ms.mesh->bbox_diagonal()) {
        Vec3 dir = (x - hit.point) / q.distance;
        q.normal = dir.dot(pn) < 0.0 ? -dir : dir;
    } else {
        q.normal = pn;
    }
    return q;
}

Vec3 Surface::normal_at(const Vec3& y) const {
    SurfaceQuery q = closest_point(y);
    const double tol = 10.0 * std::numeric_limits<double>::epsilon() * scale();
    if (q.distance > tol) {
        throw Error(ErrorCode::off_surface, "point is not on the surface (distance " +
                                                std::to_string(q.distance) + ")");
    }
    if (const auto* ms = std::get_if<MeshShape>(&shape_)) {
        MeshIndex::Hit hit = ms->index->closest(y);
        return ms->mesh->pseudo_normal(hit.triangle, hit.point);
    }
    return q.normal;
}

std::string Surface::describe() const {
    std::ostringstream os;
    if (const auto* c = std::get_if<CircleShape>(&shape_)) {
        os << "circle(center=(" << c->center.x << "," << c->center.y << "),radius=" << c->radius << ")";
    } else if (const auto* s = std::get_if<SphereShape>(&shape_)) {
        os << "sphere(center=(" << s->center.x << "," << s->center.y << "," << s->center.z
           << "),radius=" << s->radius << ")";
    } else if (const auto* t = std::get_if<TorusShape>(&shape_)) {
        os << "torus(R=" << t->major_radius << ",r=" << t->minor_radius << ")";
    } else {
        const auto& m = std::get<MeshShape>(shape_);
        os << "mesh(vertices=" << m.mesh->vertices().size()
           << ",triangles=" << m.mesh->triangles().size() << ")";
    }
    return os.str();
}

}  // namespace cpdd
