/// @file diag_approx.hpp
/// @brief Approximate inverse diagonal together with its sorting permutation.

#ifndef TRACEINV_DIAG_APPROX_HPP
#define TRACEINV_DIAG_APPROX_HPP

#include <vector>

#include "traceinv/sparse_matrix.hpp"

namespace traceinv {

enum class ApproxSource { ilu, svd, bounds_lower, bounds_upper };

const char* to_string(ApproxSource s);

/// M ~ diag(A^-1) plus the permutation that sorts it ascending.
/// sort_perm[p] is the original index of the p-th smallest entry; ties keep
/// original index order so the permutation is deterministic.
struct DiagApprox {
    DenseVector m;
    std::vector<int> sort_perm;
    ApproxSource source = ApproxSource::ilu;

    int size() const { return static_cast<int>(m.size()); }

    /// Entry of the sorted diagonal at sorted position p.
    double sorted(int p) const { return m[sort_perm[p]]; }

    /// Materialized ascending copy of m.
    DenseVector sorted_values() const;

    double trace() const;
};

DiagApprox make_diag_approx(DenseVector m, ApproxSource source);

}  // namespace traceinv

#endif
