/// @file dense_oracle.hpp
/// @brief Dense factorization references for desk-scale matrices.
///
/// These routines are exact up to roundoff and intentionally O(n^3); the
/// order cap keeps them usable as references without surprising runtimes.

#ifndef TRACEINV_DENSE_ORACLE_HPP
#define TRACEINV_DENSE_ORACLE_HPP

#include <utility>
#include <vector>

#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

inline constexpr int kOracleCap = 5000;

/// Row-major square dense matrix.
struct DenseMatrix {
    int n = 0;
    std::vector<double> a;

    DenseMatrix() = default;
    explicit DenseMatrix(int order) : n(order), a(static_cast<std::size_t>(order) * order, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    double trace() const;
    DenseVector diagonal() const;
};

DenseMatrix to_dense(const SparseMatrix& a);

/// Full inverse by dense LU. Throws on singular input or order above cap.
DenseMatrix dense_inverse(const SparseMatrix& a, int cap = kOracleCap);
DenseMatrix dense_inverse(const DenseMatrix& a, int cap = kOracleCap);

/// diag(A^-1) via the dense inverse.
DenseVector dense_inverse_diagonal(const SparseMatrix& a, int cap = kOracleCap);

/// Extreme eigenvalues (min, max) of a symmetric matrix, dense solve.
std::pair<double, double> dense_symmetric_spectrum(const SparseMatrix& a, int cap = kOracleCap);

}  // namespace traceinv

#endif
