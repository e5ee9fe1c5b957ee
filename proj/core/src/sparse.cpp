#include "cpdd/sparse.hpp"

#include <algorithm>
#include <cmath>

namespace cpdd {

SparseMatrix SparseMatrix::from_triplets(std::int32_t n_rows, std::int32_t n_cols,
                                         std::vector<Triplet> triplets, bool drop_zeros) {
    for (const auto& t : triplets) {
        if (t.row < 0 || t.row >= n_rows || t.col < 0 || t.col >= n_cols) {
            throw Error(ErrorCode::dimension_mismatch, "triplet index out of range");
        }
    }
    std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m(n_rows, n_cols);
    m.col_index_.reserve(triplets.size());
    m.values_.reserve(triplets.size());
    std::size_t i = 0;
    for (std::int32_t row = 0; row < n_rows; ++row) {
        while (i < triplets.size() && triplets[i].row == row) {
            std::int32_t col = triplets[i].col;
            double v = 0.0;
            while (i < triplets.size() && triplets[i].row == row && triplets[i].col == col) {
                v += triplets[i].value;
                ++i;
            }
            if (v != 0.0 || !drop_zeros) {
                m.col_index_.push_back(col);
                m.values_.push_back(v);
            }
        }
        m.offsets_[row + 1] = static_cast<std::int64_t>(m.col_index_.size());
    }
    return m;
}

SparseMatrix SparseMatrix::identity(std::int32_t n, double scale) {
    SparseMatrix m(n, n);
    m.col_index_.resize(n);
    m.values_.assign(n, scale);
    for (std::int32_t i = 0; i < n; ++i) {
        m.col_index_[i] = i;
        m.offsets_[i + 1] = i + 1;
    }
    return m;
}

double SparseMatrix::coeff(std::int32_t i, std::int32_t j) const {
    auto cols = row_cols(i);
    auto it = std::lower_bound(cols.begin(), cols.end(), j);
    if (it == cols.end() || *it != j) return 0.0;
    return values_[offsets_[i] + (it - cols.begin())];
}

void SparseMatrix::multiply_vector(std::span<const double> x, std::span<double> y) const {
    if (static_cast<std::int32_t>(x.size()) != n_cols_ || static_cast<std::int32_t>(y.size()) != n_rows_) {
        throw Error(ErrorCode::dimension_mismatch, "spmv shape mismatch");
    }
    for (std::int32_t i = 0; i < n_rows_; ++i) {
        double acc = 0.0;
        for (std::int64_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            acc += values_[k] * x[col_index_[k]];
        }
        y[i] = acc;
    }
}

std::vector<double> SparseMatrix::multiply_vector(std::span<const double> x) const {
    std::vector<double> y(n_rows_);
    multiply_vector(x, y);
    return y;
}

SparseMatrix SparseMatrix::multiply(const SparseMatrix& other) const {
    if (n_cols_ != other.n_rows_) {
        throw Error(ErrorCode::dimension_mismatch, "sparse product shape mismatch");
    }
    SparseMatrix out(n_rows_, other.n_cols_);

    // Gustavson row-by-row product with a dense accumulator and row markers.
    std::vector<double> acc(other.n_cols_, 0.0);
    std::vector<std::int32_t> mark(other.n_cols_, -1);
    std::vector<std::int32_t> touched;
    for (std::int32_t i = 0; i < n_rows_; ++i) {
        touched.clear();
        for (std::int64_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            std::int32_t m = col_index_[k];
            double a = values_[k];
            for (std::int64_t l = other.offsets_[m]; l < other.offsets_[m + 1]; ++l) {
                std::int32_t j = other.col_index_[l];
                if (mark[j] != i) {
                    mark[j] = i;
                    acc[j] = 0.0;
                    touched.push_back(j);
                }
                acc[j] += a * other.values_[l];
            }
        }
        std::sort(touched.begin(), touched.end());
        for (std::int32_t j : touched) {
            if (acc[j] != 0.0) {
                out.col_index_.push_back(j);
                out.values_.push_back(acc[j]);
            }
        }
        out.offsets_[i + 1] = static_cast<std::int64_t>(out.col_index_.size());
    }
    return out;
}

SparseMatrix SparseMatrix::add(const SparseMatrix& other, double alpha) const {
    if (n_rows_ != other.n_rows_ || n_cols_ != other.n_cols_) {
        throw Error(ErrorCode::dimension_mismatch, "sparse add shape mismatch");
    }
    SparseMatrix out(n_rows_, n_cols_);
    for (std::int32_t i = 0; i < n_rows_; ++i) {
        std::int64_t ka = offsets_[i], kb = other.offsets_[i];
        const std::int64_t ea = offsets_[i + 1], eb = other.offsets_[i + 1];
        while (ka < ea || kb < eb) {
            std::int32_t ca = ka < ea ? col_index_[ka] : n_cols_;
            std::int32_t cb = kb < eb ? other.col_index_[kb] : n_cols_;
            std::int32_t c = std::min(ca, cb);
            double v = 0.0;
            if (ca == c) v += values_[ka++];
            if (cb == c) v += alpha * other.values_[kb++];
            if (v != 0.0) {
                out.col_index_.push_back(c);
                out.values_.push_back(v);
            }
        }
        out.offsets_[i + 1] = static_cast<std::int64_t>(out.col_index_.size());
    }
    return out;
}

void SparseMatrix::check_consistent() const {
    if (offsets_.size() != static_cast<std::size_t>(n_rows_) + 1 || offsets_.front() != 0 ||
        offsets_.back() != static_cast<std::int64_t>(col_index_.size()) ||
        col_index_.size() != values_.size()) {
        throw Error(ErrorCode::dimension_mismatch, "inconsistent CSR arrays");
    }
    for (std::int32_t i = 0; i < n_rows_; ++i) {
        if (offsets_[i] > offsets_[i + 1]) {
            throw Error(ErrorCode::dimension_mismatch, "decreasing row offsets");
        }
        for (std::int64_t k = offsets_[i]; k < offsets_[i + 1]; ++k) {
            if (col_index_[k] < 0 || col_index_[k] >= n_cols_) {
                throw Error(ErrorCode::dimension_mismatch, "column index out of range");
            }
            if (k > offsets_[i] && col_index_[k - 1] >= col_index_[k]) {
                throw Error(ErrorCode::dimension_mismatch, "columns not strictly increasing");
            }
        }
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace cpdd
