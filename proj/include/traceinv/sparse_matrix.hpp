/// @file sparse_matrix.hpp
/// @brief Square sparse matrix in CSR format with owned storage.

#ifndef TRACEINV_SPARSE_MATRIX_HPP
#define TRACEINV_SPARSE_MATRIX_HPP

#include <span>
#include <vector>

namespace traceinv {

using DenseVector = std::vector<double>;

struct Triplet {
    int row = 0;
    int col = 0;
    double value = 0.0;
};

/// Square sparse matrix, compressed sparse row. Column indices are sorted
/// within each row and hold no duplicates; values are finite.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;    // length n+1, nondecreasing
    std::vector<int> col_idx;
    std::vector<double> values;

    int nnz() const { return static_cast<int>(values.size()); }

    /// Entry lookup by binary search within the row; zero if not stored.
    double at(int i, int j) const;

    /// Assemble from coordinate triplets. Duplicate coordinates are summed.
    static SparseMatrix from_triplets(int n, std::vector<Triplet> entries);
};

/// Throws std::invalid_argument if the CSR invariants do not hold.
void validate(const SparseMatrix& a);

/// y = A * x
void matvec(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
void matvec_serial(const SparseMatrix& a, std::span<const double> x, std::span<double> y);
DenseVector matvec(const SparseMatrix& a, const DenseVector& x);

bool is_symmetric(const SparseMatrix& a, double tol = 0.0);

SparseMatrix transpose(const SparseMatrix& a);

}  // namespace traceinv

#endif
