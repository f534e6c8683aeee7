#include "traceinv/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace traceinv {

namespace {

double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// MATLAB-style one-sided three-point endpoint slope, clipped so the end
/// piece stays shape preserving.
double endpoint_slope(double h0, double h1, double del0, double del1) {
    double d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if (sign(d) != sign(del0)) {
        d = 0.0;
    } else if (sign(del0) != sign(del1) && std::abs(d) > 3.0 * std::abs(del0)) {
        d = 3.0 * del0;
    }
    return d;
}

double eval_pchip(const PchipModel& p, double x) {
    const std::size_t k = p.knots_x.size();
    if (x <= p.knots_x.front()) return p.knots_y.front();
    if (x >= p.knots_x.back()) return p.knots_y.back();
    // containing interval by binary search
    const auto it = std::upper_bound(p.knots_x.begin(), p.knots_x.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - p.knots_x.begin()) - 1;
    const std::size_t j1 = std::min(j + 1, k - 1);
    const double h = p.knots_x[j1] - p.knots_x[j];
    const double t = (x - p.knots_x[j]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * p.knots_y[j] + h10 * h * p.derivs[j] + h01 * p.knots_y[j1] +
           h11 * h * p.derivs[j1];
}

}  // namespace

LinearModel fit_linear(std::span<const double> m_vals, std::span<const double> d_vals) {
    const std::size_t s = m_vals.size();
    if (s < 2 || d_vals.size() != s) {
        throw std::invalid_argument("fit_linear: need >= 2 aligned samples");
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        mx += m_vals[i];
        my += d_vals[i];
    }
    mx /= static_cast<double>(s);
    my /= static_cast<double>(s);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < s; ++i) {
        const double dx = m_vals[i] - mx;
        sxx += dx * dx;
        sxy += dx * (d_vals[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_linear: all m values equal (rank deficient)");
    }
    LinearModel out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    return out;
}

PchipModel fit_pchip(const DiagApprox& approx, const FitSampleSet& samples,
                     std::span<const double> d_vals) {
    if (d_vals.size() != samples.original_indices.size()) {
        throw std::invalid_argument("fit_pchip: d_vals misaligned with samples");
    }
    PchipModel p;
    // sorted positions give nondecreasing x; drop repeats, keep the first
    for (std::size_t j = 0; j < samples.sorted_positions.size(); ++j) {
        const double x = approx.sorted(samples.sorted_positions[j]);
        if (!p.knots_x.empty() && x == p.knots_x.back()) continue;
        if (!p.knots_x.empty() && x < p.knots_x.back()) {
            throw std::invalid_argument("fit_pchip: sample positions not sorted");
        }
        p.knots_x.push_back(x);
        p.knots_y.push_back(d_vals[j]);
    }
    const std::size_t k = p.knots_x.size();
    if (k < 2) {
        throw std::invalid_argument("fit_pchip: fewer than two distinct knots");
    }

    p.derivs.assign(k, 0.0);
    if (k == 2) {
        const double del = (p.knots_y[1] - p.knots_y[0]) / (p.knots_x[1] - p.knots_x[0]);
        p.derivs[0] = p.derivs[1] = del;
        return p;
    }
    std::vector<double> h(k - 1), del(k - 1);
    for (std::size_t j = 0; j + 1 < k; ++j) {
        h[j] = p.knots_x[j + 1] - p.knots_x[j];
        del[j] = (p.knots_y[j + 1] - p.knots_y[j]) / h[j];
    }
    for (std::size_t j = 1; j + 1 < k; ++j) {
        if (del[j - 1] == 0.0 || del[j] == 0.0 || sign(del[j - 1]) != sign(del[j])) {
            p.derivs[j] = 0.0;
        } else {
            // weighted harmonic mean of the neighboring secants
            const double w1 = 2.0 * h[j] + h[j - 1];
            const double w2 = h[j] + 2.0 * h[j - 1];
            p.derivs[j] = (w1 + w2) / (w1 / del[j - 1] + w2 / del[j]);
        }
    }
    p.derivs[0] = endpoint_slope(h[0], h[1], del[0], del[1]);
    p.derivs[k - 1] = endpoint_slope(h[k - 2], h[k - 3], del[k - 2], del[k - 3]);
    return p;
}

double eval_model(const FitModel& f, double x) {
    if (const LinearModel* lin = std::get_if<LinearModel>(&f.model)) {
        return lin->slope * x + lin->intercept;
    }
    return eval_pchip(std::get<PchipModel>(f.model), x);
}

double trace_from_fit(const FitModel& f, const DenseVector& m) {
    const int n = static_cast<int>(m.size());
    DenseVector vals(n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        vals[i] = eval_model(f, m[i]);
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += vals[i];
    return sum;
}

double trace_from_fit_serial(const FitModel& f, const DenseVector& m) {
    const int n = static_cast<int>(m.size());
    DenseVector vals(n);
    for (int i = 0; i < n; ++i) {
        vals[i] = eval_model(f, m[i]);
    }
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += vals[i];
    return sum;
}

DenseVector fitted_residual(const FitModel& f, const DenseVector& m,
                            std::span<const int> probe_indices,
                            std::span<const double> probe_d,
                            std::span<const int> fit_indices) {
    if (probe_indices.size() != probe_d.size()) {
        throw std::invalid_argument("fitted_residual: probe arrays misaligned");
    }
    std::set<int> fit(fit_indices.begin(), fit_indices.end());
    DenseVector out;
    out.reserve(probe_indices.size());
    for (std::size_t j = 0; j < probe_indices.size(); ++j) {
        const int i = probe_indices[j];
        if (i < 0 || i >= static_cast<int>(m.size())) {
            throw std::invalid_argument("fitted_residual: probe index out of range");
        }
        if (fit.count(i)) {
            throw std::invalid_argument(
                "fitted_residual: probe index overlaps the fitting set");
        }
        out.push_back(probe_d[j] - eval_model(f, m[i]));
    }
    return out;
}

}  // namespace traceinv
