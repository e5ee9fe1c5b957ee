#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cpdd/sparse.hpp"

namespace cpdd {

/**
 * Sparse LU factorization for the subdomain and reference solves.
 *
 * Uses a fill-reducing column ordering (COLAMD) with threshold partial
 * pivoting. Immutable once computed; concurrent solves on distinct
 * right-hand sides are safe.
 */
class Factorization {
  public:
    static constexpr double kDefaultPivotThreshold = 0.1;

    /** Throws Error(singular_matrix) when a pivot falls below 1e-14 * max|A|. */
    static Factorization compute(const SparseMatrix& a,
                                 double pivot_threshold = kDefaultPivotThreshold);

    std::vector<double> solve(std::span<const double> rhs) const;
    void solve(std::span<const double> rhs, std::span<double> x) const;

    std::int32_t size() const { return n_; }
    double pivot_threshold() const { return pivot_threshold_; }

  private:
    struct Impl;
    Factorization(std::shared_ptr<const Impl> impl, std::int32_t n, double thresh)
        : impl_(std::move(impl)), n_(n), pivot_threshold_(thresh) {}

    std::shared_ptr<const Impl> impl_;
    std::int32_t n_ = 0;
    double pivot_threshold_ = kDefaultPivotThreshold;
};

}  // namespace cpdd
