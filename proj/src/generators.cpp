#include "traceinv/generators.hpp"

#include <stdexcept>

namespace traceinv {

namespace {

SparseMatrix grid_stencil(int grid_side, double diag, double off) {
    const int k = grid_side;
    const int n = k * k;
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(5) * n);
    for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
            int i = r * k + c;  // row-major node ordering
            entries.push_back({i, i, diag});
            if (r > 0) entries.push_back({i, i - k, off});
            if (r < k - 1) entries.push_back({i, i + k, off});
            if (c > 0) entries.push_back({i, i - 1, off});
            if (c < k - 1) entries.push_back({i, i + 1, off});
        }
    }
    return SparseMatrix::from_triplets(n, std::move(entries));
}

}  // namespace

SparseMatrix gen_poisson2d(int grid_side) {
    if (grid_side < 2) {
        throw std::invalid_argument("gen_poisson2d: grid_side must be >= 2");
    }
    return grid_stencil(grid_side, 4.0, -1.0);
}

SparseMatrix gen_heatflow(int grid_side, double alpha) {
    if (grid_side < 2) {
        throw std::invalid_argument("gen_heatflow: grid_side must be >= 2");
    }
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("gen_heatflow: alpha must be positive");
    }
    return grid_stencil(grid_side, 1.0 + 4.0 * alpha, -alpha);
}

}  // namespace traceinv
