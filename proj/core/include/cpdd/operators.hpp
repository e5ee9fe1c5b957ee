#pragma once

#include <functional>

#include "cpdd/band.hpp"
#include "cpdd/sparse.hpp"

namespace cpdd {

/**
 * Barycentric Lagrange weights on the uniform nodes 0..p evaluated at t,
 * using stage weights w_j = (-1)^j binom(p, j). Exact node hits return a
 * unit vector. Supported degrees: 0..6.
 */
std::vector<double> interp_weights_1d(int p, double t);

/** Active-node tensor-product interpolation stencil for a point in the tube. */
struct PointStencil {
    std::vector<std::int32_t> nodes;  // global active indices
    std::vector<double> weights;      // same length; sums to 1
};

/** Throws Error(stencil_incomplete) if any stencil node is not active. */
PointStencil interpolation_stencil(const Band& band, const Vec3& point);

/** Extension matrix E, shape (N_A + N_G) x N_A: row i interpolates at node i's
    closest point. Every row carries exactly (p+1)^d entries summing to 1. */
SparseMatrix assemble_extension(const Band& band);

/** Centered-difference Laplacian, shape N_A x (N_A + N_G). */
SparseMatrix assemble_laplacian(const Band& band);

/**
 * Global Helmholtz operator A = (c + 2d/dx^2) I - (2d/dx^2 I + Lap) E using
 * the stabilized Laplace-Beltrami form; the sparse product is verified
 * entrywise against a direct row construction on assembly.
 */
SparseMatrix assemble_helmholtz(const Band& band, double c, const SparseMatrix& laplacian,
                                const SparseMatrix& extension);

struct GlobalOperators {
    SparseMatrix laplacian;  // N_A x (N_A + N_G)
    SparseMatrix extension;  // (N_A + N_G) x N_A
    SparseMatrix helmholtz;  // N_A x N_A
    double c = 1.0;
};

GlobalOperators assemble_global(const Band& band, double c);

/** Samples a surface field at the active nodes' closest points. */
std::vector<double> sample_rhs(const Band& band, const std::function<double(const Vec3&)>& f);

}  // namespace cpdd
