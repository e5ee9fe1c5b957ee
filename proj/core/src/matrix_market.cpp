#include "cpdd/matrix_market.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace cpdd {

void write_matrix_market(std::ostream& os, const SparseMatrix& m) {
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << m.rows() << " " << m.cols() << " " << m.nnz() << "\n";
    os << std::setprecision(17);
    for (std::int32_t i = 0; i < m.rows(); ++i) {
        auto cols = m.row_cols(i);
        auto vals = m.row_values(i);
        for (std::size_t k = 0; k < cols.size(); ++k) {
            os << i + 1 << " " << cols[k] + 1 << " " << vals[k] << "\n";
        }
    }
}

void write_matrix_market(const std::string& path, const SparseMatrix& m) {
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::io_error, "cannot write " + path);
    write_matrix_market(os, m);
}

SparseMatrix read_matrix_market(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("%%MatrixMarket", 0) != 0) {
        throw Error(ErrorCode::io_error, "missing MatrixMarket banner");
    }
    {
        std::istringstream banner(line);
        std::string tag, object, format, field, symmetry;
        banner >> tag >> object >> format >> field >> symmetry;
        if (object != "matrix" || format != "coordinate" || field != "real" ||
            symmetry != "general") {
            throw Error(ErrorCode::io_error, "unsupported MatrixMarket flavor: " + line);
        }
    }
    while (std::getline(is, line)) {
        if (!line.empty() && line[0] != '%') break;
    }
    std::int64_t rows = 0, cols = 0, nnz = 0;
    {
        std::istringstream sizes(line);
        if (!(sizes >> rows >> cols >> nnz)) {
            throw Error(ErrorCode::io_error, "bad MatrixMarket size line: " + line);
        }
    }
    std::vector<SparseMatrix::Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(nnz));
    for (std::int64_t k = 0; k < nnz; ++k) {
        std::int64_t i = 0, j = 0;
        double v = 0.0;
        if (!(is >> i >> j >> v)) {
            throw Error(ErrorCode::io_error, "truncated MatrixMarket entries");
        }
        triplets.push_back({static_cast<std::int32_t>(i - 1), static_cast<std::int32_t>(j - 1), v});
    }
    return SparseMatrix::from_triplets(static_cast<std::int32_t>(rows),
                                       static_cast<std::int32_t>(cols), std::move(triplets),
                                       /*drop_zeros=*/false);
}

SparseMatrix read_matrix_market(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::io_error, "cannot read " + path);
    return read_matrix_market(is);
}

}  // namespace cpdd
