#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cpdd/solve_report.hpp"

namespace cpdd {

/** Applies a linear operator: y = Op(x). Sizes are fixed by the caller. */
using LinearOperator = std::function<void(std::span<const double>, std::span<double>)>;

struct GmresOptions {
    double rtol = 1e-6;
    int restart = 30;
    int max_iter = 1000;
};

struct GmresResult {
    std::vector<double> x;
    SolveReport report;
};

/**
 * Restarted GMRES with optional right preconditioning.
 *
 * Solves A (M^-1 y) = b and returns x = M^-1 y, so residual norms in the
 * report are true residuals ||b - A x||_2. Terminates when the residual
 * drops below rtol * ||b||_2. Hitting max_iter returns the best iterate
 * with converged = false; an Arnoldi breakdown that is not a converged
 * solution throws Error(breakdown).
 */
GmresResult gmres(const LinearOperator& apply_a, std::span<const double> b,
                  const LinearOperator& apply_m, const GmresOptions& options);

inline GmresResult gmres(const LinearOperator& apply_a, std::span<const double> b,
                         const GmresOptions& options) {
    return gmres(apply_a, b, nullptr, options);
}

}  // namespace cpdd
