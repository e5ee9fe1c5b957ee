#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "cpdd/mesh_index.hpp"
#include "cpdd/surface.hpp"

namespace cpdd::testing {

/** Regular icosahedron with circumradius 1. */
inline TriMesh make_icosahedron() {
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    const double s = 1.0 / std::sqrt(1.0 + phi * phi);
    const double a = s, b = phi * s;
    std::vector<Vec3> v = {
        {-a, b, 0}, {a, b, 0}, {-a, -b, 0}, {a, -b, 0}, {0, -a, b}, {0, a, b},
        {0, -a, -b}, {0, a, -b}, {b, 0, -a}, {b, 0, a}, {-b, 0, -a}, {-b, 0, a},
    };
    std::vector<std::array<int, 3>> t = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},
        {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},   {3, 4, 2},
        {3, 2, 6},  {3, 6, 8},  {3, 8, 9},   {4, 9, 5},  {2, 4, 11},  {6, 2, 10},
        {8, 6, 7},  {9, 8, 1},
    };
    return TriMesh(std::move(v), std::move(t));
}

/** Icosphere: `levels` rounds of 1-to-4 subdivision projected to the unit sphere. */
inline TriMesh make_icosphere(int levels) {
    TriMesh ico = make_icosahedron();
    std::vector<Vec3> verts = ico.vertices();
    std::vector<std::array<int, 3>> tris = ico.triangles();
    for (int l = 0; l < levels; ++l) {
        std::vector<std::array<int, 3>> next;
        next.reserve(tris.size() * 4);
        std::vector<std::vector<std::pair<int, int>>> midpoint(verts.size());
        auto mid = [&](int i, int j) {
            if (i > j) std::swap(i, j);
            for (auto& [other, idx] : midpoint[i]) {
                if (other == j) return idx;
            }
            Vec3 m = ((verts[i] + verts[j]) * 0.5).normalized();
            verts.push_back(m);
            int idx = static_cast<int>(verts.size()) - 1;
            midpoint[i].push_back({j, idx});
            return idx;
        };
        for (const auto& t : tris) {
            int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
            next.push_back({t[0], ab, ca});
            next.push_back({t[1], bc, ab});
            next.push_back({t[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }
    return TriMesh(std::move(verts), std::move(tris));
}

/** Axis-aligned cube [-1,1]^3 as 12 triangles with outward winding. */
inline TriMesh make_cube() {
    std::vector<Vec3> v = {
        {-1, -1, -1}, {1, -1, -1}, {1, 1, -1}, {-1, 1, -1},
        {-1, -1, 1},  {1, -1, 1},  {1, 1, 1},  {-1, 1, 1},
    };
    std::vector<std::array<int, 3>> t = {
        {0, 2, 1}, {0, 3, 2},  // z = -1
        {4, 5, 6}, {4, 6, 7},  // z = +1
        {0, 1, 5}, {0, 5, 4},  // y = -1
        {2, 3, 7}, {2, 7, 6},  // y = +1
        {1, 2, 6}, {1, 6, 5},  // x = +1
        {3, 0, 4}, {3, 4, 7},  // x = -1
    };
    return TriMesh(std::move(v), std::move(t));
}

/** Brute-force closest point over every triangle; ties resolve to the smaller
    triangle index, matching the index contract. */
struct BruteForceHit {
    Vec3 point;
    int triangle = -1;
    double dist2 = 0.0;
};

inline BruteForceHit brute_force_closest(const TriMesh& mesh, const Vec3& p) {
    BruteForceHit best;
    best.dist2 = std::numeric_limits<double>::max();
    for (int t = 0; t < static_cast<int>(mesh.triangles().size()); ++t) {
        const auto& tri = mesh.triangles()[t];
        Vec3 cp = closest_point_on_triangle(p, mesh.vertices()[tri[0]], mesh.vertices()[tri[1]],
                                            mesh.vertices()[tri[2]]);
        double d2 = (p - cp).squared_norm();
        if (d2 < best.dist2) {
            best.dist2 = d2;
            best.triangle = t;
            best.point = cp;
        }
    }
    return best;
}

inline std::mt19937_64 rng(std::uint64_t seed = 20240817ull) { return std::mt19937_64(seed); }

}  // namespace cpdd::testing
