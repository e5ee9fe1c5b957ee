#include "cpdd/subdomain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "cpdd/parallel.hpp"

namespace cpdd {

Vec3 compute_conormal(const Vec3& x, const Vec3& y, const Vec3& n_hat) {
    const Vec3 d = x - y;
    const double dlen = d.norm();
    if (dlen == 0.0) return {};
    const Vec3 tang = d - n_hat * d.dot(n_hat);
    const double tlen = tang.norm();
    if (tlen < 1e-10 * dlen) return {};
    return tang / tlen;
}

Subdomain grow_subdomain(const Band& band, const DisjointPartition& partition, std::int32_t j,
                         int n_overlap, TransmissionCondition tc, const Surface& surface,
                         const SubdomainOptions& options) {
    if (n_overlap < 1) throw Error(ErrorCode::invalid_config, "overlap width N_O must be >= 1");
    if (tc.is_robin() && n_overlap < 2) {
        throw Error(ErrorCode::invalid_config,
                    "Robin transmission conditions require N_O >= 2 so the boundary samples "
                    "are distinct from the disjoint part");
    }
    if (j < 0 || j >= partition.n_subdomains) {
        throw Error(ErrorCode::invalid_config, "subdomain id outside the partition");
    }
    const std::int32_t n_active = band.n_active();
    if (static_cast<std::int32_t>(partition.labels.size()) != n_active) {
        throw Error(ErrorCode::wrong_length, "partition does not match the band");
    }

    Subdomain sub;
    sub.id = j;
    sub.n_overlap = n_overlap;
    sub.tc = tc;

    // Step 1: seed with the disjoint piece (band order = lattice order).
    std::vector<char> in_interior(n_active, 0);
    for (std::int32_t i = 0; i < n_active; ++i) {
        if (partition.labels[i] == j) {
            sub.interior.push_back(i);
            sub.layer_of.push_back(0);
            in_interior[i] = 1;
        }
    }
    sub.n_disjoint = static_cast<std::int32_t>(sub.interior.size());
    if (sub.n_disjoint == 0) {
        throw Error(ErrorCode::empty_subdomain, "disjoint part " + std::to_string(j) + " is empty");
    }

    // Step 2: N_O layers of overlap, one at a time, from active neighbors.
    std::vector<std::int32_t> frontier(sub.interior.begin(), sub.interior.end());
    std::vector<std::int32_t> final_layer;
    for (int level = 1; level <= n_overlap; ++level) {
        std::vector<std::int32_t> next;
        for (std::int32_t u : frontier) {
            for (const Lattice& c : laplacian_neighbors(band.node(u).lat, band.dim())) {
                std::int32_t v = band.find(c);
                if (v >= 0 && band.is_active_index(v) && !in_interior[v]) {
                    in_interior[v] = 1;
                    next.push_back(v);
                }
            }
        }
        std::sort(next.begin(), next.end());
        if (next.empty()) break;  // this component is fully covered
        for (std::int32_t v : next) {
            sub.interior.push_back(v);
            sub.layer_of.push_back(level);
        }
        if (static_cast<std::int32_t>(sub.interior.size()) == n_active &&
            partition.n_subdomains > 1) {
            throw Error(ErrorCode::overlap_exceeds_domain,
                        "overlap layer " + std::to_string(level) +
                            " consumed the entire active set; decrease N_O or N_S");
        }
        if (level == n_overlap) final_layer = std::move(next);
        else frontier = std::move(next);
    }

    // Step 3: ghost nodes adjacent to the subdomain.
    std::vector<char> seen_ghost(band.n_ghost(), 0);
    for (std::int32_t u : sub.interior) {
        for (const Lattice& c : laplacian_neighbors(band.node(u).lat, band.dim())) {
            std::int32_t v = band.find(c);
            if (v >= n_active && !seen_ghost[v - n_active]) {
                seen_ghost[v - n_active] = 1;
                sub.ghosts.push_back(v);
            }
        }
    }
    std::sort(sub.ghosts.begin(), sub.ghosts.end());

    // Step 4: the discrete boundary -- closest points of the final layer.
    sub.lambda.reserve(final_layer.size());
    for (std::int32_t u : final_layer) {
        const SurfaceQuery& q = band.node(u).query;
        BoundarySample s;
        s.point = q.closest_point;
        s.normal = options.lambda_normal == LambdaNormalMode::band_query
                       ? q.normal
                       : surface.normal_at(q.closest_point);
        s.source_node = u;
        sub.lambda.push_back(s);
    }

    // Step 5: stencil-completion nodes.
    std::vector<char> in_bc(band.n_nodes(), 0);
    std::vector<std::int32_t> bc_list;
    auto add_bc = [&](std::int32_t v) {
        if (!in_bc[v] && !(band.is_active_index(v) && in_interior[v])) {
            in_bc[v] = 1;
            bc_list.push_back(v);
        }
    };
    // 5a: Laplacian stencils of interior nodes (active neighbors beyond Sigma_j).
    std::vector<std::int32_t> lap_nbrs;
    for (std::int32_t u : sub.interior) {
        for (const Lattice& c : laplacian_neighbors(band.node(u).lat, band.dim())) {
            std::int32_t v = band.find(c);
            if (v >= 0 && band.is_active_index(v) && !in_interior[v]) {
                add_bc(v);
                lap_nbrs.push_back(v);
            }
        }
    }
    // 5b: interpolation stencils of every extension row the local system uses:
    // rows of interior nodes, the ghost fringe, and the active neighbors above.
    auto add_stencil_of = [&](std::int32_t node_index) {
        PointStencil st = interpolation_stencil(band, band.node(node_index).query.closest_point);
        for (std::int32_t s : st.nodes) {
            if (!in_interior[s]) add_bc(s);
        }
    };
    for (std::int32_t u : sub.interior) add_stencil_of(u);
    for (std::int32_t g : sub.ghosts) add_stencil_of(g);
    for (std::int32_t v : lap_nbrs) add_stencil_of(v);
    // 5c: stencils interpolating at the boundary samples themselves.
    for (const BoundarySample& s : sub.lambda) {
        PointStencil st = interpolation_stencil(band, s.point);
        for (std::int32_t v : st.nodes) {
            if (!in_interior[v]) add_bc(v);
        }
    }

    // Step 6 (Robin only): one layer of ghost-like nodes around Sigma_j^BC.
    std::vector<char> from_ghost_layer(band.n_nodes(), 0);
    if (tc.is_robin()) {
        std::vector<std::int32_t> extra;
        for (std::int32_t b : bc_list) {
            for (const Lattice& c : laplacian_neighbors(band.node(b).lat, band.dim())) {
                std::int32_t v = band.find(c);
                if (v < 0) continue;  // outside the band entirely
                if (band.is_active_index(v) && in_interior[v]) continue;
                if (!in_bc[v]) {
                    in_bc[v] = 1;
                    extra.push_back(v);
                    from_ghost_layer[v] = 1;
                }
            }
        }
        bc_list.insert(bc_list.end(), extra.begin(), extra.end());
    }
    std::sort(bc_list.begin(), bc_list.end());

    if (!bc_list.empty() && sub.lambda.empty()) {
        throw Error(ErrorCode::stencil_escapes_subdomain,
                    "transmission nodes exist but the boundary sample set is empty");
    }

    // Per-node boundary identification: nearest Lambda_j sample, conormal,
    // and the Robin scaling 1/(1 + alpha d.q).
    sub.bc_nodes.reserve(bc_list.size());
    for (std::int32_t b : bc_list) {
        BcNode node;
        node.global_index = b;
        node.from_ghost_layer = from_ghost_layer[b] != 0;
        const Vec3 x = band.position(band.node(b).lat);
        double best = std::numeric_limits<double>::max();
        for (std::size_t s = 0; s < sub.lambda.size(); ++s) {
            double d2 = (x - sub.lambda[s].point).squared_norm();
            if (d2 < best) {
                best = d2;
                node.lambda_index = static_cast<std::int32_t>(s);
            }
        }
        const BoundarySample& s = sub.lambda[node.lambda_index];
        node.displacement = x - s.point;
        node.conormal = compute_conormal(x, s.point, s.normal);
        node.degenerate = node.conormal.squared_norm() == 0.0;
        node.d_dot_q = node.displacement.dot(node.conormal);
        node.robin_scale =
            (tc.is_robin() && !node.degenerate) ? 1.0 / (1.0 + tc.alpha * node.d_dot_q) : 1.0;
        sub.bc_nodes.push_back(node);
    }

    // Local index map: interior block then BC block.
    sub.global_to_local.reserve(sub.interior.size() + sub.bc_nodes.size());
    for (std::int32_t k = 0; k < sub.n_interior(); ++k) sub.global_to_local[sub.interior[k]] = k;
    for (std::int32_t k = 0; k < sub.n_bc(); ++k) {
        sub.global_to_local[sub.bc_nodes[k].global_index] = sub.n_interior() + k;
    }
    return sub;
}

void assemble_local_operator(Subdomain& sub, const Band& band, const GlobalOperators& ops) {
    const std::int32_t n_int = sub.n_interior();
    const std::int32_t n_loc = sub.n_local();

    std::vector<SparseMatrix::Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(n_loc) * 8);

    // Interior rows reuse the global Helmholtz rows, remapped to local columns.
    for (std::int32_t k = 0; k < n_int; ++k) {
        const std::int32_t i = sub.interior[k];
        auto cols = ops.helmholtz.row_cols(i);
        auto vals = ops.helmholtz.row_values(i);
        for (std::size_t m = 0; m < cols.size(); ++m) {
            auto it = sub.global_to_local.find(cols[m]);
            if (it == sub.global_to_local.end()) {
                throw Error(ErrorCode::stencil_escapes_subdomain,
                            "global operator column " + std::to_string(cols[m]) +
                                " missing from subdomain " + std::to_string(sub.id));
            }
            triplets.push_back({k, it->second, vals[m]});
        }
    }

    // BC rows enforce the transmission condition: v(x_i) - T_i v = 0 with
    // T_i = 0 for Dirichlet and robin_scale * (interpolation at y_i) for Robin.
    std::vector<std::optional<PointStencil>> lambda_stencils(sub.lambda.size());
    for (std::int32_t k = 0; k < sub.n_bc(); ++k) {
        const std::int32_t row = n_int + k;
        triplets.push_back({row, row, 1.0});
        if (!sub.tc.is_robin()) continue;
        const BcNode& node = sub.bc_nodes[k];
        auto& st = lambda_stencils[node.lambda_index];
        if (!st) st = interpolation_stencil(band, sub.lambda[node.lambda_index].point);
        for (std::size_t m = 0; m < st->nodes.size(); ++m) {
            auto it = sub.global_to_local.find(st->nodes[m]);
            if (it == sub.global_to_local.end()) {
                throw Error(ErrorCode::stencil_escapes_subdomain,
                            "boundary-sample stencil node " + std::to_string(st->nodes[m]) +
                                " missing from subdomain " + std::to_string(sub.id));
            }
            triplets.push_back({row, it->second, -node.robin_scale * st->weights[m]});
        }
    }

    sub.local_operator = SparseMatrix::from_triplets(n_loc, n_loc, std::move(triplets));
    try {
        sub.factorization = Factorization::compute(sub.local_operator);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::singular_matrix) {
            throw Error(ErrorCode::singular_local,
                        "local operator of subdomain " + std::to_string(sub.id) + " is singular");
        }
        throw;
    }
}

std::vector<double> local_solve(const Subdomain& sub, std::span<const double> rhs) {
    if (!sub.factorization) {
        throw Error(ErrorCode::invalid_config, "subdomain operator has not been assembled");
    }
    return sub.factorization->solve(rhs);
}

std::vector<Subdomain> build_subdomains(const Band& band, const DisjointPartition& partition,
                                        int n_overlap, TransmissionCondition tc,
                                        const Surface& surface, const GlobalOperators& ops,
                                        int threads, const SubdomainOptions& options) {
    if (static_cast<std::int32_t>(partition.labels.size()) != band.n_active()) {
        throw Error(ErrorCode::wrong_length, "partition does not match the band");
    }
    for (std::int32_t i = 0; i < band.n_active(); ++i) {
        if (partition.labels[i] < 0 || partition.labels[i] >= partition.n_subdomains) {
            throw Error(ErrorCode::label_out_of_range,
                        "active node " + std::to_string(i) + " carries label " +
                            std::to_string(partition.labels[i]));
        }
    }

    std::vector<Subdomain> subs(partition.n_subdomains);
    parallel_for(partition.n_subdomains, threads, [&](std::size_t j) {
        subs[j] = grow_subdomain(band, partition, static_cast<std::int32_t>(j), n_overlap, tc,
                                 surface, options);
        assemble_local_operator(subs[j], band, ops);
    });

    // Restricted-update ownership audit: the disjoint pieces tile Sigma_A.
    std::vector<std::int32_t> owner(band.n_active(), -1);
    for (const Subdomain& sub : subs) {
        for (std::int32_t k = 0; k < sub.n_disjoint; ++k) {
            if (owner[sub.interior[k]] != -1) {
                throw Error(ErrorCode::invalid_config, "disjoint pieces overlap");
            }
            owner[sub.interior[k]] = sub.id;
        }
    }
    for (std::int32_t i = 0; i < band.n_active(); ++i) {
        if (owner[i] == -1) {
            throw Error(ErrorCode::invalid_config, "active node not owned by any subdomain");
        }
    }
    return subs;
}

void write_subdomain_csv(std::ostream& os, const Subdomain& sub, const Band& band) {
    os << "record,global_index,layer,x,y,z,nx,ny,nz,qx,qy,qz,robin_scale,lambda_index\n";
    auto point_of = [&](std::int32_t i) { return band.position(band.node(i).lat); };
    for (std::int32_t k = 0; k < sub.n_interior(); ++k) {
        Vec3 p = point_of(sub.interior[k]);
        const char* role = sub.layer_of[k] == 0 ? "disjoint" : "overlap";
        os << role << "," << sub.interior[k] << "," << sub.layer_of[k] << "," << p.x << "," << p.y
           << "," << p.z << ",,,,,,,,\n";
    }
    for (std::int32_t g : sub.ghosts) {
        Vec3 p = point_of(g);
        os << "ghost," << g << ",," << p.x << "," << p.y << "," << p.z << ",,,,,,,,\n";
    }
    for (const BcNode& b : sub.bc_nodes) {
        Vec3 p = point_of(b.global_index);
        os << "bc," << b.global_index << ",," << p.x << "," << p.y << "," << p.z << ",,,,"
           << b.conormal.x << "," << b.conormal.y << "," << b.conormal.z << "," << b.robin_scale
           << "," << b.lambda_index << "\n";
    }
    for (std::size_t s = 0; s < sub.lambda.size(); ++s) {
        const BoundarySample& l = sub.lambda[s];
        os << "lambda," << l.source_node << ",," << l.point.x << "," << l.point.y << ","
           << l.point.z << "," << l.normal.x << "," << l.normal.y << "," << l.normal.z << ",,,,,"
           << s << "\n";
    }
}

}  // namespace cpdd
