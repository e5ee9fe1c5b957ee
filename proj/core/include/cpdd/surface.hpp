#pragma once

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cpdd/error.hpp"
#include "cpdd/vec.hpp"

namespace cpdd {

/** Result of projecting a query point onto a surface. */
struct SurfaceQuery {
    Vec3 query_point;
    Vec3 closest_point;
    double distance = 0.0;
    /** Unit surface normal at closest_point. */
    Vec3 normal;
};

class MeshIndex;

/** Triangle soup with the adjacency needed for pseudo-normal evaluation. */
class TriMesh {
  public:
    TriMesh() = default;
    TriMesh(std::vector<Vec3> vertices, std::vector<std::array<int, 3>> triangles);

    static TriMesh load_off(const std::string& path);
    static TriMesh load_obj(const std::string& path);

    const std::vector<Vec3>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }

    void scale_uniform(double factor);
    /** Scales uniformly so the y-extent of the bounding box equals `height`. */
    void scale_height_to(double height);
    /** Translates so the bounding-box center sits at the origin. */
    void center_at_origin();

    Vec3 bbox_min() const { return bbox_min_; }
    Vec3 bbox_max() const { return bbox_max_; }
    double bbox_diagonal() const { return (bbox_max_ - bbox_min_).norm(); }

    Vec3 face_normal(int t) const { return face_normals_[t]; }
    /** Angle-weighted pseudo-normal of the face/edge/vertex feature containing
        the given point of triangle t. */
    Vec3 pseudo_normal(int t, const Vec3& point_on_triangle) const;
    Vec3 vertex_pseudo_normal(int v) const { return vertex_normals_[v]; }

  private:
    void recompute_derived();
    Vec3 edge_pseudo_normal(int va, int vb) const;

    std::vector<Vec3> vertices_;
    std::vector<std::array<int, 3>> triangles_;
    std::vector<Vec3> face_normals_;
    std::vector<Vec3> vertex_normals_;
    std::vector<std::vector<int>> vertex_faces_;
    Vec3 bbox_min_, bbox_max_;
};

/** How normals are reported for off-surface queries against meshes. */
enum class MeshNormalMode {
    /** (x - cp)/|x - cp| oriented by the pseudo-normal; pseudo-normal when x ~ cp. */
    displacement,
    /** Always the angle-weighted pseudo-normal of the hit feature. */
    pseudo,
};

/**
 * Closed surface with a closest-point oracle: analytic circle/sphere/torus
 * or a triangulated mesh with a BVH. Immutable after construction; queries
 * are safe from concurrent threads.
 */
class Surface {
  public:
    static Surface circle(const Vec3& center, double radius);
    static Surface sphere(const Vec3& center, double radius);
    static Surface torus(const Vec3& center, double major_radius, double minor_radius);
    static Surface mesh(TriMesh mesh);

    /** Embedding dimension: 2 for circles, 3 otherwise. */
    int dim() const;

    /** Upper bound on principal curvatures; known analytically except for meshes. */
    std::optional<double> curvature_bound() const { return curvature_bound_; }
    void set_curvature_bound(double kappa) { curvature_bound_ = kappa; }

    /** Global closest-point projection CP_S(x). */
    SurfaceQuery closest_point(const Vec3& x) const;

    /** Normal at an on-surface point; throws OffSurface if y is not on S. */
    Vec3 normal_at(const Vec3& y) const;

    /** A point on the surface usable as a band flood-fill seed. */
    Vec3 default_seed() const;

    /** Characteristic length used for relative tolerances. */
    double scale() const;

    bool is_mesh() const;
    const TriMesh& tri_mesh() const;

    MeshNormalMode mesh_normal_mode() const { return mesh_normal_mode_; }
    void set_mesh_normal_mode(MeshNormalMode mode) { mesh_normal_mode_ = mode; }

    std::string describe() const;

  private:
    struct CircleShape {
        Vec3 center;
        double radius;
    };
    struct SphereShape {
        Vec3 center;
        double radius;
    };
    struct TorusShape {
        Vec3 center;
        double major_radius;
        double minor_radius;
    };
    struct MeshShape {
        std::shared_ptr<const TriMesh> mesh;
        std::shared_ptr<const MeshIndex> index;
    };

    using Shape = std::variant<CircleShape, SphereShape, TorusShape, MeshShape>;

    explicit Surface(Shape shape) : shape_(std::move(shape)) {}

    Shape shape_;
    std::optional<double> curvature_bound_;
    MeshNormalMode mesh_normal_mode_ = MeshNormalMode::displacement;
};

}  // namespace cpdd
