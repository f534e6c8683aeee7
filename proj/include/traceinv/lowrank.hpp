/// @file lowrank.hpp
/// @brief Smallest singular triplets of A and the diagonal of the induced
///        low-rank approximation of A^-1.

#ifndef TRACEINV_LOWRANK_HPP
#define TRACEINV_LOWRANK_HPP

#include <span>

#include "traceinv/diag_approx.hpp"
#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

/// k smallest singular triplets, sigma ascending, vector blocks column-major
/// n x k with unit columns. Z^-1 = V * Sigma^-1 * U^T.
struct LowRankFactors {
    int n = 0;
    int k = 0;
    DenseVector sigma;
    std::vector<double> u_vecs;
    std::vector<double> v_vecs;

    double u(int i, int j) const { return u_vecs[static_cast<std::size_t>(j) * n + i]; }
    double v(int i, int j) const { return v_vecs[static_cast<std::size_t>(j) * n + i]; }
};

/// Residual target: each triplet satisfies ||A v - sigma u|| <= 1e-6 * sigma_max.
inline constexpr double kTripletResidualTol = 1e-6;

/// Computes the k smallest singular triplets. Small orders use a dense
/// decomposition; larger ones a shift-invert Lanczos iteration on A (or
/// A^T A when unsymmetric). Throws on convergence failure, reporting the
/// achieved residuals.
LowRankFactors smallest_singular_triplets(const SparseMatrix& a, int k,
                                          int dense_limit = 800);

/// First k triplets of an existing factorization (sigma is ascending).
LowRankFactors truncate(const LowRankFactors& f, int k);

/// M_i = sum_j V(i,j) U(i,j) / sigma_j.
DiagApprox diag_from_lowrank(const LowRankFactors& f);

/// Z^-1 x = V Sigma^-1 U^T x.
DenseVector apply_inverse(const LowRankFactors& f, std::span<const double> x);

/// Z^-1 e_i without forming e_i.
DenseVector inverse_column(const LowRankFactors& f, int i);

/// E(:,i) = x_i - Z^-1 e_i.
DenseVector residual_column(const SparseMatrix& a, const LowRankFactors& f,
                            const DenseVector& x_i, int i);

}  // namespace traceinv

#endif
