/// @file matrix_market.hpp
/// @brief Matrix Market coordinate I/O (real, general or symmetric).

#ifndef TRACEINV_MATRIX_MARKET_HPP
#define TRACEINV_MATRIX_MARKET_HPP

#include <iosfwd>
#include <string>

#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

/// Reads a coordinate-format Matrix Market file. Symmetric storage is
/// expanded to full. Throws std::runtime_error on parse failures,
/// non-square shapes, and non-real fields.
SparseMatrix read_matrix_market(const std::string& path);
SparseMatrix read_matrix_market(std::istream& in, const std::string& name = "<stream>");

/// Writes coordinate format with 1-based indices and full (general) storage.
/// Values are printed with enough digits to round-trip exactly.
void write_matrix_market(const SparseMatrix& a, const std::string& path);
void write_matrix_market(const SparseMatrix& a, std::ostream& out);

}  // namespace traceinv

#endif
