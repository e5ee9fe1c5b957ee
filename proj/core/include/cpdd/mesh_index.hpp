#pragma once

#include <vector>

#include "cpdd/vec.hpp"

namespace cpdd {

class TriMesh;

/** Exact closest point on a single triangle (barycentric region classification). */
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c);

/**
 * Axis-aligned bounding-box hierarchy over mesh triangles. Queries return the
 * exact global minimizer; ties between triangles resolve to the smallest
 * triangle index so results match a brute-force scan bit for bit.
 */
class MeshIndex {
  public:
    struct Hit {
        Vec3 point;
        int triangle = -1;
        double dist2 = 0.0;
    };

    /** Throws Error(empty_mesh) for meshes without triangles. */
    explicit MeshIndex(const TriMesh& mesh);

    Hit closest(const Vec3& query) const;

    int node_count() const { return static_cast<int>(nodes_.size()); }
    int leaf_count() const { return leaf_count_; }

  private:
    struct Node {
        Vec3 lo, hi;
        int left = -1;   // internal: child index; leaf: first triangle slot
        int right = -1;  // internal: child index; leaf: one-past-last slot
        bool leaf = false;
    };

    int build(std::vector<int>& tris, int begin, int end);
    double box_dist2(const Node& n, const Vec3& p) const;

    const TriMesh* mesh_;
    std::vector<Node> nodes_;
    std::vector<int> order_;  // triangle ids grouped by leaf
    std::vector<Vec3> centroids_;
    int leaf_count_ = 0;
};

}  // namespace cpdd
