#include "traceinv/diag_approx.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace traceinv {

const char* to_string(ApproxSource s) {
    switch (s) {
        case ApproxSource::ilu: return "ilu";
        case ApproxSource::svd: return "svd";
        case ApproxSource::bounds_lower: return "bounds-lower";
        case ApproxSource::bounds_upper: return "bounds-upper";
    }
    return "?";
}

DenseVector DiagApprox::sorted_values() const {
    DenseVector out(m.size());
    for (std::size_t p = 0; p < m.size(); ++p) {
        out[p] = m[sort_perm[p]];
    }
    return out;
}

double DiagApprox::trace() const {
    double t = 0.0;
    for (double v : m) t += v;
    return t;
}

DiagApprox make_diag_approx(DenseVector m, ApproxSource source) {
    if (m.empty()) {
        throw std::invalid_argument("make_diag_approx: empty diagonal");
    }
    for (double v : m) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("make_diag_approx: non-finite entry");
        }
    }
    DiagApprox d;
    d.sort_perm.resize(m.size());
    std::iota(d.sort_perm.begin(), d.sort_perm.end(), 0);
    std::stable_sort(d.sort_perm.begin(), d.sort_perm.end(),
                     [&m](int a, int b) { return m[a] < m[b]; });
    d.m = std::move(m);
    d.source = source;
    return d;
}

}  // namespace traceinv
