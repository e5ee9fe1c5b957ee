#pragma once

#include <iosfwd>
#include <string>

#include "cpdd/sparse.hpp"

namespace cpdd {

/** Coordinate-format MatrixMarket ("matrix coordinate real general"). */
void write_matrix_market(std::ostream& os, const SparseMatrix& m);
void write_matrix_market(const std::string& path, const SparseMatrix& m);

SparseMatrix read_matrix_market(std::istream& is);
SparseMatrix read_matrix_market(const std::string& path);

}  // namespace cpdd
