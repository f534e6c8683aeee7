/// @file estimators.hpp
/// @brief Monte Carlo trace estimators and their closed-form variances.

#ifndef TRACEINV_ESTIMATORS_HPP
#define TRACEINV_ESTIMATORS_HPP

#include <cstdint>
#include <functional>
#include <span>

#include "traceinv/dense_oracle.hpp"
#include "traceinv/fitting.hpp"
#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

struct EstimatorStats {
    double estimate = 0.0;
    int sample_count = 0;
    /// Unbiased sample variance of the per-sample values divided by the
    /// sample count, i.e. the estimated variance of `estimate` itself.
    /// Zero when fewer than two samples were drawn.
    double sample_variance = 0.0;
    std::uint64_t seed = 0;
};

/// Matrix implicitly available through its action on a vector. The callable
/// must be safe to invoke from several threads at once.
struct LinearOperator {
    int dim = 0;
    std::function<DenseVector(const DenseVector&)> apply;
};

/// Sampled access to diagonal entries.
using DiagAccess = std::function<double(int)>;

/// Rademacher estimator: (1/s) sum_j z_j^T op(z_j) with z entries +-1.
/// Bit-reproducible for a fixed seed; samples are evaluated in parallel on
/// per-sample substreams.
EstimatorStats hutchinson_trace(const LinearOperator& op, int s, std::uint64_t seed);

/// (N/s) sum over s uniformly drawn canonical indices, without replacement
/// (requires s <= n).
EstimatorStats unit_vector_trace(const DiagAccess& diag_at, int n, int s, std::uint64_t seed);

/// Importance sampling with probabilities proportional to the shifted M:
/// indices are drawn with replacement with probability (M_i + shift)/Tr(M + shift),
/// each sample is Tr(M + shift) * (D_i + shift)/(M_i + shift), and the shift
/// contribution n * shift is removed from the reported estimate. Every
/// shifted M entry must be positive.
EstimatorStats importance_sampling_trace(const DiagAccess& diag_at, const DenseVector& m,
                                         int s, std::uint64_t seed, double shift);

/// Shift recipe making both vectors positive on the probed entries.
double default_importance_shift(const DenseVector& m, std::span<const double> probed_d);

/// (2/s)(||B||_F^2 - sum_i B_ii^2); B is symmetrized first since
/// z^T B z = z^T (B + B^T) z / 2.
double exact_variance_hutchinson(const DenseMatrix& b, int s);

/// (N^2/s) * population variance of D.
double exact_variance_unit(const DenseVector& d, int s);

struct ResidualVariances {
    double hutch_e = 0.0;      // Rademacher on E = A^-1 - Z^-1
    double unit_e = 0.0;       // unit vector on diag(E)
    double unit_efit = 0.0;    // unit vector on D - f(M)
};

ResidualVariances exact_variance_residuals(const DenseMatrix& a_inv, const DenseMatrix& z_inv,
                                           const FitModel& f, const DenseVector& m, int s);

}  // namespace traceinv

#endif
