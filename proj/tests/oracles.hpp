#pragma once

// Brute-force references shared by the unit tests and the acceptance run.
// They only use plain integer arithmetic and never call library algorithms.

#include "kserver/core.hpp"
#include "kserver/metric.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <numeric>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<int>>;

inline Matrix floyd(std::size_t n, const std::vector<kserver::Edge>& edges) {
    constexpr int inf = 1 << 20;
    Matrix d(n, std::vector<int>(n, inf));
    for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
    for (auto [u, v] : edges) d[u][v] = d[v][u] = std::min(d[u][v], 1);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
    return d;
}

// Random spanning tree plus `extra` random edges.
inline std::shared_ptr<const kserver::GraphMetric> random_graph(std::mt19937_64& rng, std::size_t n,
                                                                std::size_t extra) {
    std::vector<kserver::Edge> edges;
    for (std::uint32_t v = 1; v < n; ++v) edges.emplace_back(static_cast<std::uint32_t>(rng() % v), v);
    for (std::size_t e = 0; e < extra; ++e) {
        const auto u = static_cast<std::uint32_t>(rng() % n);
        const auto v = static_cast<std::uint32_t>(rng() % n);
        if (u == v) continue;
        const kserver::Edge edge{std::min(u, v), std::max(u, v)};
        if (std::find(edges.begin(), edges.end(), edge) == edges.end() &&
            std::find(edges.begin(), edges.end(), kserver::Edge{edge.second, edge.first}) == edges.end())
            edges.push_back(edge);
    }
    return std::make_shared<const kserver::GraphMetric>(kserver::SpaceInfo{"random", {}}, n, edges);
}

inline int labeled_step(const Matrix& d, const std::vector<int>& a, const std::vector<int>& b, bool time) {
    int total = 0;
    for (std::size_t i = 0; i < a.size(); ++i) total = time ? std::max(total, d[a[i]][b[i]]) : total + d[a[i]][b[i]];
    return total;
}

inline int bottleneck(const Matrix& d, const std::vector<int>& a, std::vector<int> b) {
    std::sort(b.begin(), b.end());
    int best = std::numeric_limits<int>::max();
    do best = std::min(best, labeled_step(d, a, b, true));
    while (std::next_permutation(b.begin(), b.end()));
    return best;
}

// Optimum over every labeled schedule: each C_j ranges over all of V^k that
// covers r_j.
inline int opt(const Matrix& d, const std::vector<int>& initial, const std::vector<int>& requests, bool time) {
    const std::size_t n = d.size();
    const std::size_t k = initial.size();
    std::vector<std::vector<int>> configs;
    std::vector<int> c(k, 0);
    for (;;) {
        configs.push_back(c);
        std::size_t i = 0;
        while (i < k && ++c[i] == static_cast<int>(n)) c[i++] = 0;
        if (i == k) break;
    }
    int best = std::numeric_limits<int>::max();
    auto dfs = [&](auto&& self, std::size_t j, const std::vector<int>& prev, int cost) -> void {
        if (j == requests.size()) {
            best = std::min(best, cost);
            return;
        }
        for (const auto& next : configs) {
            if (std::find(next.begin(), next.end(), requests[j]) == next.end()) continue;
            self(self, j + 1, next, cost + labeled_step(d, prev, next, time));
        }
    };
    dfs(dfs, 0, initial, 0);
    return best;
}

struct SmallInstance {
    kserver::Instance instance;
    Matrix d;
    std::vector<int> initial;
    std::vector<int> requests;
};

inline SmallInstance random_small_instance(std::mt19937_64& rng, std::size_t max_vertices, std::size_t k,
                                           std::size_t max_requests) {
    const std::size_t n = 2 + rng() % (max_vertices - 1);
    auto g = random_graph(rng, n, rng() % (n + 1));
    SmallInstance s;
    s.d = floyd(n, g->edges());
    std::vector<kserver::Point> start;
    for (std::size_t i = 0; i < k; ++i) {
        s.initial.push_back(static_cast<int>(rng() % n));
        start.push_back(kserver::Point::vertex(s.initial.back()));
    }
    const std::size_t len = rng() % (max_requests + 1);
    std::vector<kserver::Point> reqs;
    for (std::size_t j = 0; j < len; ++j) {
        s.requests.push_back(static_cast<int>(rng() % n));
        reqs.push_back(kserver::Point::vertex(s.requests.back()));
    }
    s.instance = kserver::Instance{g, kserver::Configuration(start), reqs};
    return s;
}

}  // namespace oracle
