#pragma once

#include <optional>
#include <unordered_map>

#include "cpdd/factorization.hpp"
#include "cpdd/operators.hpp"
#include "cpdd/partition.hpp"

namespace cpdd {

struct TransmissionCondition {
    enum class Kind { dirichlet, robin };
    Kind kind = Kind::dirichlet;
    double alpha = 0.0;

    static TransmissionCondition dirichlet() { return {Kind::dirichlet, 0.0}; }
    static TransmissionCondition robin(double alpha) {
        if (!(alpha > 0.0)) throw Error(ErrorCode::invalid_config, "Robin weight alpha must be positive");
        return {Kind::robin, alpha};
    }
    bool is_robin() const { return kind == Kind::robin; }
    const char* name() const { return kind == Kind::robin ? "robin" : "dirichlet"; }
};

/** Discrete boundary sample: the closest point of a final-overlap-layer node. */
struct BoundarySample {
    Vec3 point;
    Vec3 normal;
    std::int32_t source_node = -1;  // band index of the generating overlap node
};

struct BcNode {
    std::int32_t global_index = -1;  // band index (>= n_active means globally ghost)
    std::int32_t lambda_index = -1;  // nearest boundary sample
    Vec3 displacement;               // d_i = x_i - y_i
    Vec3 conormal;                   // q_hat_i; the zero vector when degenerate
    double d_dot_q = 0.0;
    double robin_scale = 1.0;  // 1/(1 + alpha d.q); exactly 1 when degenerate
    bool degenerate = false;
    bool from_ghost_layer = false;  // added by the Robin-only extra layer
};

/** Which normal Lambda_j samples carry for mesh surfaces. */
enum class LambdaNormalMode { on_surface_pseudo, band_query };

struct SubdomainOptions {
    LambdaNormalMode lambda_normal = LambdaNormalMode::on_surface_pseudo;
};

/**
 * One overlapping subdomain: the disjoint piece plus N_O layers of overlap,
 * its ghost fringe, the discrete boundary Lambda_j, and the transmission
 * nodes Sigma_j^BC where the local operator enforces the TC.
 *
 * Local unknowns are ordered interior-then-BC; interior rows of the local
 * operator reuse the global Helmholtz rows, BC rows carry the TC.
 */
struct Subdomain {
    std::int32_t id = 0;
    std::int32_t n_overlap = 0;
    TransmissionCondition tc;

    std::vector<std::int32_t> interior;  // global active indices; disjoint block first
    std::int32_t n_disjoint = 0;
    std::vector<std::int32_t> layer_of;  // per interior entry: 0 disjoint, 1..N_O overlap layer

    std::vector<BcNode> bc_nodes;
    std::vector<std::int32_t> ghosts;  // Sigma_j^G (bookkeeping/diagnostics)
    std::vector<BoundarySample> lambda;

    std::unordered_map<std::int32_t, std::int32_t> global_to_local;  // interior + bc

    SparseMatrix local_operator;
    std::optional<Factorization> factorization;

    std::int32_t n_interior() const { return static_cast<std::int32_t>(interior.size()); }
    std::int32_t n_bc() const { return static_cast<std::int32_t>(bc_nodes.size()); }
    std::int32_t n_local() const { return n_interior() + n_bc(); }
};

/**
 * Conormal direction: the component of d = x - y orthogonal to the surface
 * normal, normalized; returns the zero vector when the tangential part falls
 * below 1e-10 |d| (natural-boundary fallback).
 */
Vec3 compute_conormal(const Vec3& x, const Vec3& y, const Vec3& n_hat);

/** Steps 1-6 of the subdomain construction; no operator assembly. */
Subdomain grow_subdomain(const Band& band, const DisjointPartition& partition, std::int32_t j,
                         int n_overlap, TransmissionCondition tc, const Surface& surface,
                         const SubdomainOptions& options = {});

/** Assembles and factorizes the local operator of Eq.-(4) form. */
void assemble_local_operator(Subdomain& sub, const Band& band, const GlobalOperators& ops);

/** v = A_j^{-1} rhs through the cached factorization. */
std::vector<double> local_solve(const Subdomain& sub, std::span<const double> rhs);

/** Grows, assembles, and factorizes all subdomains (parallel over j) after
    auditing that the disjoint pieces cover the active set exactly once. */
std::vector<Subdomain> build_subdomains(const Band& band, const DisjointPartition& partition,
                                        int n_overlap, TransmissionCondition tc,
                                        const Surface& surface, const GlobalOperators& ops,
                                        int threads = 1, const SubdomainOptions& options = {});

/** Node roles, boundary samples, and conormals as CSV for plotting. */
void write_subdomain_csv(std::ostream& os, const Subdomain& sub, const Band& band);

}  // namespace cpdd
