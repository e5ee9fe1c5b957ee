#include "cpdd/schwarz.hpp"

#include <chrono>
#include <cmath>

#include "cpdd/parallel.hpp"

namespace cpdd {

void SolveReport::write_residual_csv(std::ostream& os) const {
    os << "iteration,residual_2norm,relative_residual\n";
    const double r0 = initial_residual();
    for (std::size_t i = 0; i < residual_history.size(); ++i) {
        os << i << "," << residual_history[i] << ","
           << (r0 > 0.0 ? residual_history[i] / r0 : 0.0) << "\n";
    }
}

namespace {

/** Solves subdomain j on the restricted residual and scatters the disjoint
    portion into `update`. Targets are disjoint across j, so parallel writes
    never race. */
void sweep_one(const Subdomain& sub, std::span<const double> residual, std::span<double> update) {
    std::vector<double> rhs(sub.n_local(), 0.0);
    for (std::int32_t k = 0; k < sub.n_interior(); ++k) rhs[k] = residual[sub.interior[k]];
    std::vector<double> v = sub.factorization->solve(rhs);
    for (std::int32_t k = 0; k < sub.n_disjoint; ++k) update[sub.interior[k]] = v[k];
}

}  // namespace

void apply_schwarz_preconditioner(const std::vector<Subdomain>& subdomains,
                                  std::span<const double> r, std::span<double> out, int threads) {
    std::fill(out.begin(), out.end(), 0.0);
    parallel_for(subdomains.size(), threads,
                 [&](std::size_t j) { sweep_one(subdomains[j], r, out); });
}

LinearOperator schwarz_preconditioner(const std::vector<Subdomain>& subdomains, int threads) {
    return [&subdomains, threads](std::span<const double> r, std::span<double> out) {
        apply_schwarz_preconditioner(subdomains, r, out, threads);
    };
}

SchwarzResult schwarz_solve(const SparseMatrix& a, std::span<const double> f,
                            const std::vector<Subdomain>& subdomains, const SchwarzOptions& options,
                            std::span<const double> initial_guess) {
    if (a.rows() != a.cols() || static_cast<std::int32_t>(f.size()) != a.rows()) {
        throw Error(ErrorCode::dimension_mismatch, "schwarz_solve shape mismatch");
    }
    if (!initial_guess.empty() && initial_guess.size() != f.size()) {
        throw Error(ErrorCode::dimension_mismatch, "initial guess length mismatch");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = f.size();

    SchwarzResult result;
    result.u.assign(n, 0.0);
    if (!initial_guess.empty()) result.u.assign(initial_guess.begin(), initial_guess.end());
    auto& report = result.report;
    report.echo = options.echo;

    std::vector<double> r(n), update(n), au(n);
    a.multiply_vector(result.u, au);
    for (std::size_t i = 0; i < n; ++i) r[i] = f[i] - au[i];

    const double r0 = norm2(r);
    report.residual_history.push_back(r0);
    if (r0 == 0.0) {
        report.status = SolveStatus::converged;
        report.converged = true;
        report.iterations = 0;
        report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return result;
    }
    const double target = options.rtol * r0;
    const double blowup = options.divergence_factor * r0;

    for (int iter = 1; iter <= options.max_iter; ++iter) {
        apply_schwarz_preconditioner(subdomains, r, update, options.threads);
        for (std::size_t i = 0; i < n; ++i) result.u[i] += update[i];

        a.multiply_vector(result.u, au);
        for (std::size_t i = 0; i < n; ++i) r[i] = f[i] - au[i];
        const double rnorm = norm2(r);
        report.residual_history.push_back(rnorm);
        report.iterations = iter;

        if (rnorm <= target) {
            report.status = SolveStatus::converged;
            report.converged = true;
            break;
        }
        if (rnorm > blowup || !std::isfinite(rnorm)) {
            report.status = SolveStatus::diverged;
            break;
        }
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

BlockJacobi::BlockJacobi(const SparseMatrix& a, const DisjointPartition& partition) : n_(a.rows()) {
    if (static_cast<std::int32_t>(partition.labels.size()) != a.rows()) {
        throw Error(ErrorCode::wrong_length, "partition does not match the matrix");
    }
    std::vector<std::vector<std::int32_t>> nodes(partition.n_subdomains);
    for (std::int32_t i = 0; i < a.rows(); ++i) nodes[partition.labels[i]].push_back(i);

    std::vector<std::int32_t> local_of(a.rows(), -1);
    blocks_.reserve(nodes.size());
    for (std::int32_t b = 0; b < partition.n_subdomains; ++b) {
        if (nodes[b].empty()) {
            throw Error(ErrorCode::empty_subdomain, "block " + std::to_string(b) + " is empty");
        }
        for (std::int32_t k = 0; k < static_cast<std::int32_t>(nodes[b].size()); ++k) {
            local_of[nodes[b][k]] = k;
        }
        std::vector<SparseMatrix::Triplet> triplets;
        for (std::int32_t k = 0; k < static_cast<std::int32_t>(nodes[b].size()); ++k) {
            std::int32_t i = nodes[b][k];
            auto cols = a.row_cols(i);
            auto vals = a.row_values(i);
            for (std::size_t m = 0; m < cols.size(); ++m) {
                if (partition.labels[cols[m]] == b) {
                    triplets.push_back({k, local_of[cols[m]], vals[m]});
                }
            }
        }
        SparseMatrix block = SparseMatrix::from_triplets(
            static_cast<std::int32_t>(nodes[b].size()), static_cast<std::int32_t>(nodes[b].size()),
            std::move(triplets));
        try {
            blocks_.push_back({nodes[b], Factorization::compute(block)});
        } catch (const Error& e) {
            if (e.code() == ErrorCode::singular_matrix) {
                throw Error(ErrorCode::singular_block,
                            "block " + std::to_string(b) + " of the block-Jacobi preconditioner");
            }
            throw;
        }
    }
}

void BlockJacobi::apply(std::span<const double> r, std::span<double> out) const {
    if (static_cast<std::int32_t>(r.size()) != n_ || static_cast<std::int32_t>(out.size()) != n_) {
        throw Error(ErrorCode::dimension_mismatch, "block-Jacobi shape mismatch");
    }
    for (const Block& block : blocks_) {
        std::vector<double> rhs(block.nodes.size());
        for (std::size_t k = 0; k < block.nodes.size(); ++k) rhs[k] = r[block.nodes[k]];
        std::vector<double> x = block.factorization.solve(rhs);
        for (std::size_t k = 0; k < block.nodes.size(); ++k) out[block.nodes[k]] = x[k];
    }
}

LinearOperator BlockJacobi::as_operator() const {
    return [this](std::span<const double> r, std::span<double> out) { apply(r, out); };
}

}  // namespace cpdd
