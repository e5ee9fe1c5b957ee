#pragma once

#include "cpdd/gmres.hpp"
#include "cpdd/subdomain.hpp"

namespace cpdd {

struct SchwarzOptions {
    double rtol = 1e-6;
    int max_iter = 10000;
    /** Abort when the residual grows past this factor of the initial one. */
    double divergence_factor = 1e8;
    int threads = 1;
    std::optional<ConfigEcho> echo;
};

struct SchwarzResult {
    std::vector<double> u;
    SolveReport report;
};

/**
 * Stationary RAS/ORAS iteration in correction form: every sweep solves all
 * local problems on the restricted residual (zeros over the BC rows) and
 * recombines only the disjoint portion of each local solution. Convergence
 * is measured on the true global residual against the initial one.
 */
SchwarzResult schwarz_solve(const SparseMatrix& a, std::span<const double> f,
                            const std::vector<Subdomain>& subdomains,
                            const SchwarzOptions& options = {},
                            std::span<const double> initial_guess = {});

/** One additive Schwarz sweep: M^-1 r. Usable as a GMRES preconditioner. */
void apply_schwarz_preconditioner(const std::vector<Subdomain>& subdomains,
                                  std::span<const double> r, std::span<double> out,
                                  int threads = 1);

/** Convenience wrapper binding the sweep as a LinearOperator. */
LinearOperator schwarz_preconditioner(const std::vector<Subdomain>& subdomains, int threads = 1);

/**
 * Block-Jacobi baseline: principal submatrices of A over the disjoint parts,
 * factorized once; application solves every block independently (no overlap,
 * no transmission-condition modification).
 */
class BlockJacobi {
  public:
    BlockJacobi(const SparseMatrix& a, const DisjointPartition& partition);

    void apply(std::span<const double> r, std::span<double> out) const;
    LinearOperator as_operator() const;

    std::int32_t n_blocks() const { return static_cast<std::int32_t>(blocks_.size()); }

  private:
    struct Block {
        std::vector<std::int32_t> nodes;
        Factorization factorization;
    };
    std::vector<Block> blocks_;
    std::int32_t n_ = 0;
};

}  // namespace cpdd
