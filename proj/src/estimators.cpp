#include "traceinv/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

#include "traceinv/rng.hpp"

namespace traceinv {

namespace {

/// Mean plus unbiased-variance-of-the-mean of per-sample values.
EstimatorStats summarize(const DenseVector& samples, std::uint64_t seed) {
    EstimatorStats st;
    st.seed = seed;
    st.sample_count = static_cast<int>(samples.size());
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(st.sample_count);
    st.estimate = mean;
    if (st.sample_count >= 2) {
        double ss = 0.0;
        for (double v : samples) ss += (v - mean) * (v - mean);
        st.sample_variance =
            ss / (static_cast<double>(st.sample_count - 1) * st.sample_count);
    }
    return st;
}

double population_variance(const DenseVector& d) {
    const double n = static_cast<double>(d.size());
    double mean = 0.0;
    for (double v : d) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    return ss / n;
}

}  // namespace

EstimatorStats hutchinson_trace(const LinearOperator& op, int s, std::uint64_t seed) {
    if (s < 1) {
        throw std::invalid_argument("hutchinson_trace: need s >= 1");
    }
    if (op.dim < 1 || !op.apply) {
        throw std::invalid_argument("hutchinson_trace: invalid operator");
    }
    const int n = op.dim;
    DenseVector samples(s);
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < s; ++j) {
        try {
            RngStream rng(seed, static_cast<std::uint64_t>(j));
            DenseVector z(n);
            for (int i = 0; i < n; ++i) z[i] = rng.next_sign();
            DenseVector y = op.apply(z);
            double bilinear = 0.0;
            for (int i = 0; i < n; ++i) bilinear += z[i] * y[i];
            samples[j] = bilinear;
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return summarize(samples, seed);
}

EstimatorStats unit_vector_trace(const DiagAccess& diag_at, int n, int s, std::uint64_t seed) {
    if (s < 1) {
        throw std::invalid_argument("unit_vector_trace: need s >= 1");
    }
    if (s > n) {
        throw std::invalid_argument("unit_vector_trace: s exceeds n (without replacement)");
    }
    RngStream rng(seed, 0);
    std::vector<int> picks = sample_without_replacement(n, s, rng);
    DenseVector samples(s);
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < s; ++j) {
        try {
            samples[j] = static_cast<double>(n) * diag_at(picks[j]);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return summarize(samples, seed);
}

EstimatorStats importance_sampling_trace(const DiagAccess& diag_at, const DenseVector& m,
                                         int s, std::uint64_t seed, double shift) {
    if (s < 1) {
        throw std::invalid_argument("importance_sampling_trace: need s >= 1");
    }
    const int n = static_cast<int>(m.size());
    if (n < 1) {
        throw std::invalid_argument("importance_sampling_trace: empty m");
    }
    DenseVector cumulative(n);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
        const double mi = m[i] + shift;
        if (!(mi > 0.0)) {
            throw std::invalid_argument(
                "importance_sampling_trace: nonpositive shifted m entry");
        }
        total += mi;
        cumulative[i] = total;
    }

    RngStream rng(seed, 0);
    std::vector<int> picks(s);
    for (int j = 0; j < s; ++j) {
        const double u = rng.next_double() * total;
        picks[j] = static_cast<int>(
            std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        picks[j] = std::min(picks[j], n - 1);
    }
    DenseVector samples(s);
    std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
    for (int j = 0; j < s; ++j) {
        try {
            const int i = picks[j];
            samples[j] = total * (diag_at(i) + shift) / (m[i] + shift);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    EstimatorStats st = summarize(samples, seed);
    st.estimate -= static_cast<double>(n) * shift;
    return st;
}

double default_importance_shift(const DenseVector& m, std::span<const double> probed_d) {
    constexpr double eps = 1e-8;
    double shift = 0.0;
    double min_m = m.empty() ? 0.0 : *std::min_element(m.begin(), m.end());
    shift = std::max(shift, -min_m + eps);
    if (!probed_d.empty()) {
        double min_d = *std::min_element(probed_d.begin(), probed_d.end());
        shift = std::max(shift, -min_d + eps);
    }
    return std::max(shift, 0.0);
}

double exact_variance_hutchinson(const DenseMatrix& b, int s) {
    if (s < 1) {
        throw std::invalid_argument("exact_variance_hutchinson: need s >= 1");
    }
    const int n = b.n;
    double frob = 0.0, diag = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double sym = 0.5 * (b(i, j) + b(j, i));
            frob += sym * sym;
        }
        diag += b(i, i) * b(i, i);
    }
    return (2.0 / s) * (frob - diag);
}

double exact_variance_unit(const DenseVector& d, int s) {
    if (s < 1) {
        throw std::invalid_argument("exact_variance_unit: need s >= 1");
    }
    const double n = static_cast<double>(d.size());
    return (n * n / s) * population_variance(d);
}

ResidualVariances exact_variance_residuals(const DenseMatrix& a_inv, const DenseMatrix& z_inv,
                                           const FitModel& f, const DenseVector& m, int s) {
    if (a_inv.n != z_inv.n || static_cast<int>(m.size()) != a_inv.n) {
        throw std::invalid_argument("exact_variance_residuals: dimension mismatch");
    }
    const int n = a_inv.n;
    DenseMatrix e(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            e(i, j) = a_inv(i, j) - z_inv(i, j);
        }
    }
    ResidualVariances out;
    out.hutch_e = exact_variance_hutchinson(e, s);
    out.unit_e = exact_variance_unit(e.diagonal(), s);
    DenseVector efit(n);
    for (int i = 0; i < n; ++i) {
        efit[i] = a_inv(i, i) - eval_model(f, m[i]);
    }
    out.unit_efit = exact_variance_unit(efit, s);
    return out;
}

}  // namespace traceinv
