#include "cpdd/factorization.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cmath>

namespace cpdd {

struct Factorization::Impl {
    Eigen::SparseMatrix<double> matrix;
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> solver;
};

Factorization Factorization::compute(const SparseMatrix& a, double pivot_threshold) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorCode::dimension_mismatch, "LU requires a square matrix");
    }
    const std::int32_t n = a.rows();

    auto impl = std::make_shared<Impl>();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(a.nnz()));
    double max_abs = 0.0;
    for (std::int32_t i = 0; i < n; ++i) {
        auto cols = a.row_cols(i);
        auto vals = a.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            triplets.emplace_back(i, cols[k], vals[k]);
            max_abs = std::max(max_abs, std::abs(vals[k]));
        }
    }
    if (n > 0 && max_abs == 0.0) {
        throw Error(ErrorCode::singular_matrix, "matrix is identically zero");
    }
    impl->matrix.resize(n, n);
    impl->matrix.setFromTriplets(triplets.begin(), triplets.end());
    impl->matrix.makeCompressed();

    impl->solver.setPivotThreshold(pivot_threshold);
    impl->solver.analyzePattern(impl->matrix);
    impl->solver.factorize(impl->matrix);
    if (impl->solver.info() != Eigen::Success) {
        throw Error(ErrorCode::singular_matrix,
                    "sparse LU failed: " + impl->solver.lastErrorMessage());
    }
    return Factorization(std::move(impl), n, pivot_threshold);
}

void Factorization::solve(std::span<const double> rhs, std::span<double> x) const {
    if (static_cast<std::int32_t>(rhs.size()) != n_ || static_cast<std::int32_t>(x.size()) != n_) {
        throw Error(ErrorCode::dimension_mismatch, "LU solve shape mismatch");
    }
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), n_);
    Eigen::Map<Eigen::VectorXd> out(x.data(), n_);
    out = impl_->solver.solve(b);
}

std::vector<double> Factorization::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.size());
    solve(rhs, x);
    return x;
}

}  // namespace cpdd
