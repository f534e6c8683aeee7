#include "traceinv/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <queue>
#include <set>
#include <stdexcept>

namespace traceinv {

namespace {

struct QueueEntry {
    double err;
    int left;
    int right;
    int split;
};

struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.err != b.err) return a.err < b.err;  // max-heap on error
        return a.left > b.left;                    // ties: earlier left first
    }
};

/// Largest gap (by position width, ties by left endpoint) that still has an
/// interior point; returns {-1,-1} if none.
std::pair<int, int> largest_gap(const std::set<int>& selected) {
    int best_l = -1, best_r = -1, best_w = 1;
    auto it = selected.begin();
    int prev = *it;
    for (++it; it != selected.end(); ++it) {
        const int w = *it - prev;
        if (w > best_w) {
            best_w = w;
            best_l = prev;
            best_r = *it;
        }
        prev = *it;
    }
    return {best_l, best_r};
}

std::vector<FitInterval> gap_snapshot(const DenseVector& m_hat, const std::set<int>& selected) {
    std::vector<FitInterval> gaps;
    auto it = selected.begin();
    int prev = *it;
    for (++it; it != selected.end(); ++it) {
        if (*it - prev >= 2) {
            SplitResult s = trapezoid_split(m_hat, prev, *it);
            gaps.push_back({prev, *it, s.err});
        }
        prev = *it;
    }
    return gaps;
}

FitSampleSet finalize(const DiagApprox& approx, const std::set<int>& selected) {
    DenseVector m_hat = approx.sorted_values();
    FitSampleSet out;
    out.sorted_positions.assign(selected.begin(), selected.end());
    out.original_indices.reserve(selected.size());
    for (int p : out.sorted_positions) {
        out.original_indices.push_back(approx.sort_perm[p]);
    }
    out.queue_state = gap_snapshot(m_hat, selected);
    return out;
}

}  // namespace

SplitResult trapezoid_split(std::span<const double> m_hat, int left, int right) {
    const int n = static_cast<int>(m_hat.size());
    if (left < 0 || right >= n || right < left + 2) {
        throw std::invalid_argument("trapezoid_split: interval has no interior point");
    }
    const double ml = m_hat[left];
    const double mr = m_hat[right];
    const double whole = (ml + mr) * static_cast<double>(right - left);
    SplitResult best{-1, -1.0};
    for (int t = left + 1; t < right; ++t) {
        const double mt = m_hat[t];
        const double defect = std::abs(whole - (ml + mt) * static_cast<double>(t - left) -
                                       (mt + mr) * static_cast<double>(right - t));
        if (defect > best.err) {
            best.err = defect;
            best.t = t;
        }
    }
    return best;
}

FitSampleSet select_fit_points(const DiagApprox& approx, int max_pts, double rel_threshold) {
    const int n = approx.size();
    if (n < 2) {
        throw std::invalid_argument("select_fit_points: need n >= 2");
    }
    if (max_pts < 2) {
        throw std::invalid_argument("select_fit_points: need max_pts >= 2");
    }
    if (rel_threshold < 0.0) {
        throw std::invalid_argument("select_fit_points: rel_threshold must be >= 0");
    }
    if (max_pts > n) {
        std::cerr << "select_fit_points: max_pts " << max_pts << " clamped to n = " << n
                  << "\n";
        max_pts = n;
    }

    const DenseVector m_hat = approx.sorted_values();
    double total = 0.0;
    for (double v : m_hat) total += v;
    const double init_err =
        std::abs(total - (m_hat.front() + m_hat.back()) * static_cast<double>(n - 1) / 2.0);
    const double threshold = rel_threshold * init_err;

    std::set<int> selected{0, n - 1};
    int num_samples = static_cast<int>(selected.size());

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
    auto push_interval = [&](int l, int r) {
        if (r - l >= 2) {
            SplitResult s = trapezoid_split(m_hat, l, r);
            queue.push({s.err, l, r, s.t});
        }
    };
    if (n >= 3) push_interval(0, n - 1);

    auto insert_midpoint_of_largest = [&]() {
        auto [l, r] = largest_gap(selected);
        if (l < 0) return false;
        const int mid = l + (r - l) / 2;
        selected.insert(mid);
        ++num_samples;
        push_interval(l, mid);
        push_interval(mid, r);
        return true;
    };

    bool refine = true;
    while (refine && num_samples < max_pts) {
        // drop entries whose interval has since been subdivided
        while (!queue.empty()) {
            const QueueEntry& top = queue.top();
            auto it = selected.find(top.left);
            auto next = it == selected.end() ? selected.end() : std::next(it);
            if (it == selected.end() || next == selected.end() || *next != top.right) {
                queue.pop();
                continue;
            }
            break;
        }
        if (queue.empty()) break;
        const QueueEntry top = queue.top();
        if (top.err <= threshold) {
            refine = false;  // remaining budget goes to plain bisection
            break;
        }
        queue.pop();
        selected.insert(top.split);
        ++num_samples;
        push_interval(top.left, top.split);
        push_interval(top.split, top.right);
        if (num_samples % 5 == 0 && num_samples < max_pts) {
            insert_midpoint_of_largest();
        }
    }

    while (num_samples < max_pts) {
        if (!insert_midpoint_of_largest()) break;  // every position selected
    }

    return finalize(approx, selected);
}

FitSampleSet grow_fit_points(const FitSampleSet& prev, const DiagApprox& approx, int target) {
    const int n = approx.size();
    if (target <= prev.size()) {
        throw std::invalid_argument("grow_fit_points: target must exceed |prev|");
    }

    FitSampleSet fresh = select_fit_points(approx, target);

    // prev's original indices mapped to positions under the (possibly new)
    // sorting permutation
    std::vector<int> inv(n, -1);
    for (int p = 0; p < n; ++p) {
        inv[approx.sort_perm[p]] = p;
    }
    std::vector<int> prev_pos;
    prev_pos.reserve(prev.original_indices.size());
    for (int idx : prev.original_indices) {
        if (idx < 0 || idx >= n) {
            throw std::invalid_argument("grow_fit_points: prev index out of range");
        }
        prev_pos.push_back(inv[idx]);
    }
    std::sort(prev_pos.begin(), prev_pos.end());

    std::set<int> pool(fresh.sorted_positions.begin(), fresh.sorted_positions.end());
    auto is_endpoint = [n](int p) { return p == 0 || p == n - 1; };

    // for each retained point, discard the nearest fresh candidate;
    // endpoints are only given up to the matching retained point (or when
    // nothing else remains)
    for (int p : prev_pos) {
        int best = -1;
        long best_dist = 0;
        bool best_prot = false;
        for (int f : pool) {
            const bool prot = is_endpoint(f) && f != p;
            const long dist = std::labs(static_cast<long>(f) - p);
            if (best < 0 || (best_prot && !prot) ||
                (prot == best_prot && (dist < best_dist || (dist == best_dist && f < best)))) {
                best = f;
                best_dist = dist;
                best_prot = prot;
            }
        }
        if (best >= 0) pool.erase(best);
    }

    std::set<int> merged(pool.begin(), pool.end());
    for (int p : prev_pos) merged.insert(p);

    // restore an endpoint dropped by the retention rule when a swap is
    // available
    std::set<int> prev_set(prev_pos.begin(), prev_pos.end());
    for (int e : {0, n - 1}) {
        if (merged.count(e)) continue;
        int victim = -1;
        long victim_dist = std::numeric_limits<long>::max();
        for (int q : merged) {
            if (prev_set.count(q) || is_endpoint(q)) continue;
            const long dist = std::labs(static_cast<long>(q) - e);
            if (dist < victim_dist || (dist == victim_dist && q < victim)) {
                victim = q;
                victim_dist = dist;
            }
        }
        if (victim >= 0) {
            merged.erase(victim);
            merged.insert(e);
        }
    }

    return finalize(approx, merged);
}

double trapezoid_trace_estimate(std::span<const double> m_hat, std::span<const int> positions) {
    if (positions.size() < 2) {
        throw std::invalid_argument("trapezoid_trace_estimate: need at least two positions");
    }
    double sum = 0.0;
    for (std::size_t j = 0; j + 1 < positions.size(); ++j) {
        const int l = positions[j];
        const int r = positions[j + 1];
        sum += (m_hat[l] + m_hat[r]) * static_cast<double>(r - l) / 2.0;
    }
    // half-weight correction so a full selection reproduces the plain sum
    sum += (m_hat[positions.front()] + m_hat[positions.back()]) / 2.0;
    return sum;
}

}  // namespace traceinv
