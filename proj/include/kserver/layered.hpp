#pragma once

#include "kserver/metric.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace kserver {

// Combinatorial rules shared by the deterministic and the randomized layered
// constructions. A vertex is (layer, block, group, point); group 0 is the hub
// group, groups 1..k are the fringe groups.
//
// Deterministic: hub group of size 1, fringe groups of size k-1, radix k-1.
// Randomized:    every group has N points, radix N.
// Either way there are B = k * radix^(k-1) blocks per layer, one per choice of
// one point in each of k-1 distinct fringe groups.
class LayeredScheme {
public:
    struct Vertex {
        int layer = 0;            // 0..2
        std::int64_t block = 0;   // 0..B-1
        int group = 0;            // 0 hub, 1..k fringe
        std::int64_t point = 0;   // 0..group_size-1
    };

    // Block choice: the fringe group without a chosen point and, for every
    // other group, the chosen point (points[missing] is unused).
    struct Choice {
        int missing = 1;
        std::vector<std::int64_t> points;  // indexed by group 1..k; size k+1
    };

    LayeredScheme(int k, std::int64_t hub_size, std::int64_t fringe_size, std::int64_t radix);

    static LayeredScheme deterministic(int k);
    static LayeredScheme randomized(int k, std::int64_t n);

    int k() const noexcept { return k_; }
    std::int64_t blocks() const noexcept { return blocks_; }
    std::int64_t hub_size() const noexcept { return hub_size_; }
    std::int64_t fringe_size() const noexcept { return fringe_size_; }
    std::int64_t radix() const noexcept { return radix_; }
    std::int64_t group_size(int group) const { return group == 0 ? hub_size_ : fringe_size_; }
    std::int64_t block_size() const noexcept { return hub_size_ + k_ * fringe_size_; }
    std::int64_t layer_size() const noexcept { return blocks_ * block_size(); }
    std::int64_t vertex_count() const noexcept { return 3 * layer_size(); }
    // Edge count of the union of the E(layer, block) families.
    std::int64_t edge_count() const noexcept;

    std::size_t id(const Vertex& v) const;
    Vertex vertex(std::size_t id) const;
    std::size_t hub(int layer, std::int64_t block, std::int64_t point = 0) const {
        return id({layer, block, 0, point});
    }
    std::size_t fringe(int layer, std::int64_t block, int group, std::int64_t point) const {
        return id({layer, block, group, point});
    }
    // "h(l,b,n)" / "f(l,b,g,n)", 1-based; "h(l,b)" when the hub group is a single point.
    std::string name(std::size_t id) const;

    // Mixed-radix bijection, missing group most significant; the remaining
    // groups in increasing order from least significant.
    std::int64_t encode(const Choice& choice) const;
    const Choice& choice(std::int64_t block) const;

    // Adjacency between u in layer l and x in layer l+1. Depends only on u's
    // group/point and x's block/group.
    bool forward_adjacent(int u_group, std::int64_t u_point, std::int64_t x_block, int x_group) const;
    bool adjacent(std::size_t u, std::size_t v) const;
    // Distance from the adjacency rules: 0, 1, 2 by direct tests, otherwise 3.
    std::uint32_t distance(std::size_t u, std::size_t v) const;

    // Enumerates the edge families literally, block by block.
    void for_each_edge(const std::function<void(std::uint32_t, std::uint32_t)>& emit) const;

private:
    int k_;
    std::int64_t hub_size_;
    std::int64_t fringe_size_;
    std::int64_t radix_;
    std::int64_t blocks_;
    std::vector<Choice> choices_;
};

// Implicit space that answers distance queries from the scheme's rules.
class LayeredOracleMetric final : public FiniteMetric {
public:
    LayeredOracleMetric(SpaceInfo info, LayeredScheme scheme, std::int64_t edge_cap);

    SpaceKind kind() const override { return SpaceKind::FiniteGraph; }
    std::uint32_t hops(std::size_t u, std::size_t v) const override { return scheme_.distance(u, v); }
    std::string vertex_name(std::size_t v) const override { return scheme_.name(v); }
    std::vector<Edge> edges() const override;

    const LayeredScheme& scheme() const noexcept { return scheme_; }

private:
    LayeredScheme scheme_;
    std::int64_t edge_cap_;
};

struct LayeredBuild {
    FinitePtr space;
    LayeredScheme scheme;
};

struct LayeredLimits {
    std::int64_t max_vertices = 50'000;
    std::int64_t max_edges = 5'000'000;
};

// Materialized deterministic layered graph.
LayeredBuild build_layered(int k, LayeredLimits limits = {});

struct RandomLayeredBuild {
    std::shared_ptr<const LayeredOracleMetric> oracle;
    // Present when requested and within limits.
    std::shared_ptr<const GraphMetric> materialized;
    LayeredScheme scheme;
};

RandomLayeredBuild build_layered_random(int k, std::int64_t n, bool materialize = false,
                                        LayeredLimits limits = {});

std::shared_ptr<const GraphMetric> materialize(const LayeredScheme& scheme, SpaceInfo info,
                                               LayeredLimits limits = {});

struct BlockPropertyReport {
    std::size_t checks = 0;
    std::size_t violations[3] = {0, 0, 0};
    std::string first_violation;
    bool ok() const { return violations[0] == 0 && violations[1] == 0 && violations[2] == 0; }
};

// Exhaustive check of the three per-block adjacency properties on a
// materialized graph:
//  (i)   a vertex of the previous layer touches fringe points of at most one
//        fringe group of the block;
//  (ii)  a fringe point of the next layer touches at most one fringe point of
//        the block;
//  (iii) a hub point of the next layer touches exactly one point in each of
//        exactly k-1 of the block's fringe groups.
BlockPropertyReport check_block_properties(const LayeredScheme& scheme, const GraphMetric& graph);

}  // namespace kserver
