/// @file sampling.hpp
/// @brief Greedy fitting-point selection on the sorted diagonal approximation.

#ifndef TRACEINV_SAMPLING_HPP
#define TRACEINV_SAMPLING_HPP

#include <span>
#include <vector>

#include "traceinv/diag_approx.hpp"

namespace traceinv {

struct SplitResult {
    int t = -1;        // interior position chosen for the split
    double err = 0.0;  // optimized trapezoid-area defect at t
};

/// Scans the interior of [left, right] (0-based positions into the sorted
/// vector) for the point whose insertion corrects the single-interval
/// trapezoid estimate the most:
///
///   defect(t) = |(m[L]+m[R])(R-L) - (m[L]+m[t])(t-L) - (m[t]+m[R])(R-t)|
///
/// The defect vanishes for every t on linear data. Ties pick the smallest t.
/// Requires right >= left + 2.
SplitResult trapezoid_split(std::span<const double> m_hat, int left, int right);

struct FitInterval {
    int left = 0;
    int right = 0;
    double err = 0.0;
};

struct FitSampleSet {
    /// Ascending positions into the sorted order; first is 0, last is n-1.
    std::vector<int> sorted_positions;
    /// The same points mapped to original indices (aligned with
    /// sorted_positions).
    std::vector<int> original_indices;
    /// Current gaps of width >= 2 with their best-split defects.
    std::vector<FitInterval> queue_state;

    int size() const { return static_cast<int>(sorted_positions.size()); }
};

/// Greedy selection: split the worst interval at its best interior point,
/// force a midpoint of the largest gap every 5th sample, and fall back to
/// bisection once the worst defect drops below rel_threshold times the
/// initial whole-range defect. max_pts beyond n is clamped (with a warning
/// on stderr).
FitSampleSet select_fit_points(const DiagApprox& approx, int max_pts,
                               double rel_threshold = 1e-3);

/// Grows prev to `target` points against a possibly updated approximation:
/// a fresh selection of size target is generated, the fresh points nearest
/// to prev's (in sorted position) are discarded, and the rest merge into
/// prev. All of prev's indices are retained.
FitSampleSet grow_fit_points(const FitSampleSet& prev, const DiagApprox& approx, int target);

/// Composite trapezoid estimate of the sorted-vector sum over the selected
/// positions (exact when every position is selected).
double trapezoid_trace_estimate(std::span<const double> m_hat, std::span<const int> positions);

}  // namespace traceinv

#endif
