#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cpdd/error.hpp"

namespace cpdd {

/** Compressed-sparse-row matrix; column indices strictly increasing per row. */
class SparseMatrix {
  public:
    struct Triplet {
        std::int32_t row;
        std::int32_t col;
        double value;
    };

    SparseMatrix() = default;
    SparseMatrix(std::int32_t n_rows, std::int32_t n_cols)
        : n_rows_(n_rows), n_cols_(n_cols), offsets_(static_cast<std::size_t>(n_rows) + 1, 0) {}

    /** Sorts, merges duplicates by addition, and (by default) drops entries
        that are exactly zero. Pass drop_zeros = false to keep a structural
        pattern with explicit zeros. */
    static SparseMatrix from_triplets(std::int32_t n_rows, std::int32_t n_cols,
                                      std::vector<Triplet> triplets, bool drop_zeros = true);
    static SparseMatrix identity(std::int32_t n, double scale = 1.0);

    std::int32_t rows() const { return n_rows_; }
    std::int32_t cols() const { return n_cols_; }
    std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

    std::span<const std::int32_t> row_cols(std::int32_t i) const {
        return {col_index_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
    }
    std::span<const double> row_values(std::int32_t i) const {
        return {values_.data() + offsets_[i], static_cast<std::size_t>(offsets_[i + 1] - offsets_[i])};
    }

    const std::vector<std::int64_t>& offsets() const { return offsets_; }
    const std::vector<std::int32_t>& col_index() const { return col_index_; }
    const std::vector<double>& values() const { return values_; }

    double coeff(std::int32_t i, std::int32_t j) const;

    /** y = A x. */
    void multiply_vector(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply_vector(std::span<const double> x) const;

    /** Sparse product A*B with duplicate merging and exact-zero dropping. */
    SparseMatrix multiply(const SparseMatrix& other) const;

    /** this + alpha*other; shapes must match. */
    SparseMatrix add(const SparseMatrix& other, double alpha = 1.0) const;

    /** Bitwise structural and numerical equality. */
    bool operator==(const SparseMatrix& other) const {
        return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ && offsets_ == other.offsets_ &&
               col_index_ == other.col_index_ && values_ == other.values_;
    }

    void check_consistent() const;

  private:
    std::int32_t n_rows_ = 0;
    std::int32_t n_cols_ = 0;
    std::vector<std::int64_t> offsets_;
    std::vector<std::int32_t> col_index_;
    std::vector<double> values_;
};

inline std::vector<double> spmv(const SparseMatrix& a, std::span<const double> x) {
    return a.multiply_vector(x);
}

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace cpdd
