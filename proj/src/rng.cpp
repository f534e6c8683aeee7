#include "traceinv/rng.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace traceinv {

std::vector<int> sample_without_replacement(int n, int s, RngStream& rng) {
    if (s < 0 || s > n) {
        throw std::invalid_argument("sample_without_replacement: need 0 <= s <= n");
    }
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (int i = 0; i < s; ++i) {
        int j = i + rng.next_index(n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(s);
    return pool;
}

}  // namespace traceinv
