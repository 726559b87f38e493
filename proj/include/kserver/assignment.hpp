#pragma once

#include "kserver/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace kserver {

// Square assignment problems on a k x k cost matrix (row-major). match[i] is
// the column assigned to row i.
template <class T>
struct AssignmentResult {
    T cost{};
    std::vector<std::size_t> match;
};

namespace detail {

inline bool augment(std::size_t row, const std::vector<std::vector<std::size_t>>& allowed,
                    std::vector<char>& seen, std::vector<std::size_t>& owner) {
    for (auto col : allowed[row]) {
        if (seen[col]) continue;
        seen[col] = 1;
        if (owner[col] == std::numeric_limits<std::size_t>::max() || augment(owner[col], allowed, seen, owner)) {
            owner[col] = row;
            return true;
        }
    }
    return false;
}

// Perfect matching using only entries <= threshold; empty on failure.
template <class T>
std::vector<std::size_t> threshold_matching(const std::vector<T>& cost, std::size_t k, const T& threshold) {
    std::vector<std::vector<std::size_t>> allowed(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (!(threshold < cost[i * k + j])) allowed[i].push_back(j);
    std::vector<std::size_t> owner(k, std::numeric_limits<std::size_t>::max());
    std::vector<char> seen(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::fill(seen.begin(), seen.end(), 0);
        if (!augment(i, allowed, seen, owner)) return {};
    }
    std::vector<std::size_t> match(k);
    for (std::size_t j = 0; j < k; ++j) match[owner[j]] = j;
    return match;
}

}  // namespace detail

// Min over bijections of the max matched entry: binary search over the
// sorted distinct entries, each step a bipartite matching feasibility test.
template <class T>
AssignmentResult<T> bottleneck_assignment(const std::vector<T>& cost, std::size_t k) {
    AssignmentResult<T> out;
    if (k == 0) return out;
    std::vector<T> values(cost.begin(), cost.end());
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    std::size_t lo = 0;
    std::size_t hi = values.size() - 1;
    while (lo < hi) {
        const auto mid = (lo + hi) / 2;
        if (detail::threshold_matching(cost, k, values[mid]).empty())
            lo = mid + 1;
        else
            hi = mid;
    }
    out.cost = values[lo];
    out.match = detail::threshold_matching(cost, k, values[lo]);
    return out;
}

// Min over bijections of the sum of matched entries (bitmask DP).
template <class T>
AssignmentResult<T> min_sum_assignment(const std::vector<T>& cost, std::size_t k) {
    AssignmentResult<T> out;
    if (k == 0) return out;
    if (k > 20) throw TooLarge("min-sum assignment limited to k <= 20");
    const std::size_t full = std::size_t{1} << k;
    std::vector<T> best(full);
    std::vector<char> known(full, 0);
    std::vector<std::size_t> pick(full, 0);
    known[0] = 1;
    // best[mask]: rows 0..popcount(mask)-1 assigned to the columns in mask.
    for (std::size_t mask = 0; mask < full; ++mask) {
        if (!known[mask]) continue;
        const auto row = static_cast<std::size_t>(__builtin_popcountll(mask));
        if (row == k) continue;
        for (std::size_t j = 0; j < k; ++j) {
            if (mask & (std::size_t{1} << j)) continue;
            const auto next = mask | (std::size_t{1} << j);
            const T candidate = best[mask] + cost[row * k + j];
            if (!known[next] || candidate < best[next]) {
                best[next] = candidate;
                known[next] = 1;
                pick[next] = j;
            }
        }
    }
    out.cost = best[full - 1];
    out.match.assign(k, 0);
    std::size_t mask = full - 1;
    for (std::size_t row = k; row-- > 0;) {
        out.match[row] = pick[mask];
        mask &= ~(std::size_t{1} << pick[mask]);
    }
    return out;
}

}  // namespace kserver
