/// @file fitting.hpp
/// @brief Linear least-squares and monotone piecewise-cubic fits of the
///        sampled exact diagonal against the approximate one.

#ifndef TRACEINV_FITTING_HPP
#define TRACEINV_FITTING_HPP

#include <span>
#include <variant>
#include <vector>

#include "traceinv/diag_approx.hpp"
#include "traceinv/sampling.hpp"

namespace traceinv {

struct LinearModel {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Shape-preserving cubic Hermite interpolant with Fritsch-Carlson slopes.
/// Outside the knot range evaluation clamps to the boundary knot value.
struct PchipModel {
    std::vector<double> knots_x;  // strictly increasing
    std::vector<double> knots_y;
    std::vector<double> derivs;
};

struct FitModel {
    std::variant<LinearModel, PchipModel> model;

    FitModel() = default;
    FitModel(LinearModel m) : model(m) {}
    FitModel(PchipModel m) : model(std::move(m)) {}
};

/// Ordinary least squares for y = slope * m + intercept. Requires at least
/// two samples with non-constant m values.
LinearModel fit_linear(std::span<const double> m_vals, std::span<const double> d_vals);

/// PCHIP through (sorted approximation value, exact diagonal value) pairs.
/// Equal sorted values are deduplicated keeping the first occurrence;
/// d_vals is aligned with samples.original_indices.
PchipModel fit_pchip(const DiagApprox& approx, const FitSampleSet& samples,
                     std::span<const double> d_vals);

double eval_model(const FitModel& f, double x);

/// T_f = sum_i f(M_i)
double trace_from_fit(const FitModel& f, const DenseVector& m);
double trace_from_fit_serial(const FitModel& f, const DenseVector& m);

/// D_i - f(M_i) on probe indices; the probes must be disjoint from the
/// indices the model was fitted on.
DenseVector fitted_residual(const FitModel& f, const DenseVector& m,
                            std::span<const int> probe_indices,
                            std::span<const double> probe_d,
                            std::span<const int> fit_indices);

}  // namespace traceinv

#endif
