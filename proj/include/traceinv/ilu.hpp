/// @file ilu.hpp
/// @brief Incomplete LU factorizations and the diagonal of (LU)^-1.

#ifndef TRACEINV_ILU_HPP
#define TRACEINV_ILU_HPP

#include <span>

#include "traceinv/diag_approx.hpp"
#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

/// L is unit lower triangular (unit diagonal stored), U upper triangular
/// with nonzero diagonal.
struct IluFactors {
    SparseMatrix lower;
    SparseMatrix upper;
    double droptol = 0.0;
};

/// Zero-fill variant restricted to the sparsity pattern of A.
IluFactors ilu0_factorize(const SparseMatrix& a);

/// Threshold variant: entries below droptol times the row norm are dropped.
/// droptol = 0 performs a complete LU (fill permitted).
IluFactors ilut_factorize(const SparseMatrix& a, double droptol);

/// In-place x <- L^-1 x (unit lower) and x <- U^-1 x.
void lower_unit_solve(const SparseMatrix& lower, std::span<double> x);
void upper_solve(const SparseMatrix& upper, std::span<double> x);

/// Z^-1 e_i = U^-1 L^-1 e_i, two sparse triangular solves.
DenseVector inverse_column(const IluFactors& f, int i);

/// x <- (LU)^-1 x
void apply_inverse(const IluFactors& f, std::span<double> x);

/// diag(Z^-1), one column pair of triangular solves per index.
DiagApprox diag_inverse_from_ilu(const IluFactors& f);
DenseVector diag_inverse_from_ilu_serial(const IluFactors& f);

/// E(:,i) = x_i - Z^-1 e_i where x_i is the solved column A^-1 e_i.
DenseVector residual_column(const SparseMatrix& a, const IluFactors& f,
                            const DenseVector& x_i, int i);

}  // namespace traceinv

#endif
