#include "cpdd/mesh_index.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "cpdd/error.hpp"
#include "cpdd/surface.hpp"

namespace cpdd {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 ab = b - a, ac = c - a, ap = p - a;
    const double d1 = ab.dot(ap), d2 = ac.dot(ap);
    if (d1 <= 0.0 && d2 <= 0.0) return a;

    const Vec3 bp = p - b;
    const double d3 = ab.dot(bp), d4 = ac.dot(bp);
    if (d3 >= 0.0 && d4 <= d3) return b;

    const double vc = d1 * d4 - d3 * d2;
    if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
        double v = d1 / (d1 - d3);
        return a + ab * v;
    }

    const Vec3 cp = p - c;
    const double d5 = ab.dot(cp), d6 = ac.dot(cp);
    if (d6 >= 0.0 && d5 <= d6) return c;

    const double vb = d5 * d2 - d1 * d6;
    if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
        double w = d2 / (d2 - d6);
        return a + ac * w;
    }

    const double va = d3 * d6 - d5 * d4;
    if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
        double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return b + (c - b) * w;
    }

    const double denom = 1.0 / (va + vb + vc);
    const double v = vb * denom, w = vc * denom;
    return a + ab * v + ac * w;
}

namespace {
constexpr int kLeafSize = 4;
}

MeshIndex::MeshIndex(const TriMesh& mesh) : mesh_(&mesh) {
    const int nt = static_cast<int>(mesh.triangles().size());
    if (nt == 0) throw Error(ErrorCode::empty_mesh, "cannot index a mesh without triangles");
    centroids_.resize(nt);
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles()[t];
        centroids_[t] = (mesh.vertices()[tri[0]] + mesh.vertices()[tri[1]] + mesh.vertices()[tri[2]]) / 3.0;
    }
    std::vector<int> tris(nt);
    std::iota(tris.begin(), tris.end(), 0);
    nodes_.reserve(static_cast<std::size_t>(2 * nt / kLeafSize + 2));
    build(tris, 0, nt);
}

int MeshIndex::build(std::vector<int>& tris, int begin, int end) {
    const int node_id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();

    Vec3 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max()};
    Vec3 hi = -lo;
    Vec3 clo = lo, chi = hi;
    for (int i = begin; i < end; ++i) {
        const auto& tri = mesh_->triangles()[tris[i]];
        for (int k = 0; k < 3; ++k) {
            const Vec3& v = mesh_->vertices()[tri[k]];
            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
        }
        const Vec3& c = centroids_[tris[i]];
        clo = {std::min(clo.x, c.x), std::min(clo.y, c.y), std::min(clo.z, c.z)};
        chi = {std::max(chi.x, c.x), std::max(chi.y, c.y), std::max(chi.z, c.z)};
    }
    nodes_[node_id].lo = lo;
    nodes_[node_id].hi = hi;

    if (end - begin <= kLeafSize) {
        nodes_[node_id].leaf = true;
        nodes_[node_id].left = static_cast<int>(order_.size());
        // Keep leaf triangles in index order so equal-distance ties are scanned
        // smallest-index first.
        std::sort(tris.begin() + begin, tris.begin() + end);
        for (int i = begin; i < end; ++i) order_.push_back(tris[i]);
        nodes_[node_id].right = static_cast<int>(order_.size());
        ++leaf_count_;
        return node_id;
    }

    Vec3 extent = chi - clo;
    int axis = 0;
    if (extent.y > extent.x) axis = 1;
    if (extent.z > extent[axis]) axis = 2;
    const int mid = (begin + end) / 2;
    std::nth_element(tris.begin() + begin, tris.begin() + mid, tris.begin() + end,
                     [&](int a, int b) {
                         double ca = centroids_[a][axis], cb = centroids_[b][axis];
                         return ca != cb ? ca < cb : a < b;
                     });

    int left = build(tris, begin, mid);
    int right = build(tris, mid, end);
    nodes_[node_id].left = left;
    nodes_[node_id].right = right;
    return node_id;
}

double MeshIndex::box_dist2(const Node& n, const Vec3& p) const {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        double lo = n.lo[k], hi = n.hi[k], v = p[k];
        double d = v < lo ? lo - v : (v > hi ? v - hi : 0.0);
        d2 += d * d;
    }
    return d2;
}

MeshIndex::Hit MeshIndex::closest(const Vec3& query) const {
    Hit best;
    best.dist2 = std::numeric_limits<double>::max();

    std::vector<std::pair<double, int>> stack;
    stack.reserve(64);
    stack.emplace_back(box_dist2(nodes_[0], query), 0);
    while (!stack.empty()) {
        auto [d2, node_id] = stack.back();
        stack.pop_back();
        if (d2 > best.dist2) continue;
        const Node& node = nodes_[node_id];
        if (node.leaf) {
            for (int slot = node.left; slot < node.right; ++slot) {
                int t = order_[slot];
                const auto& tri = mesh_->triangles()[t];
                Vec3 cp = closest_point_on_triangle(query, mesh_->vertices()[tri[0]],
                                                    mesh_->vertices()[tri[1]], mesh_->vertices()[tri[2]]);
                double td2 = (query - cp).squared_norm();
                if (td2 < best.dist2 || (td2 == best.dist2 && t < best.triangle)) {
                    best.dist2 = td2;
                    best.triangle = t;
                    best.point = cp;
                }
            }
            continue;
        }
        double dl = box_dist2(nodes_[node.left], query);
        double dr = box_dist2(nodes_[node.right], query);
        // Push the farther child first so the nearer one is explored next.
        if (dl <= dr) {
            if (dr <= best.dist2) stack.emplace_back(dr, node.right);
            if (dl <= best.dist2) stack.emplace_back(dl, node.left);
        } else {
            if (dl <= best.dist2) stack.emplace_back(dl, node.left);
            if (dr <= best.dist2) stack.emplace_back(dr, node.right);
        }
    }
    return best;
}

}  // namespace cpdd
