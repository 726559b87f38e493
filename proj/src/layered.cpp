#include "kserver/layered.hpp"

#include "kserver/errors.hpp"

#include <algorithm>

namespace kserver {

namespace {

std::int64_t checked_pow(std::int64_t base, int exponent, std::int64_t cap) {
    std::int64_t out = 1;
    for (int i = 0; i < exponent; ++i) {
        if (base != 0 && out > cap / base) throw TooLarge("layered parameters overflow");
        out *= base;
    }
    return out;
}

constexpr std::int64_t kChoiceTableCap = 20'000'000;

}  // namespace

LayeredScheme::LayeredScheme(int k, std::int64_t hub_size, std::int64_t fringe_size, std::int64_t radix)
    : k_(k), hub_size_(hub_size), fringe_size_(fringe_size), radix_(radix) {
    if (k < 2) throw InvalidParameter("layered construction needs k >= 2");
    if (hub_size < 1 || fringe_size < 1 || radix < 1 || radix > fringe_size)
        throw InvalidParameter("invalid layered group sizes");
    const auto per_missing = checked_pow(radix, k - 1, kChoiceTableCap);
    if (per_missing > kChoiceTableCap / k) throw TooLarge("too many blocks per layer");
    blocks_ = k * per_missing;
    choices_.reserve(static_cast<std::size_t>(blocks_));
    for (std::int64_t c = 0; c < blocks_; ++c) {
        Choice choice;
        choice.missing = static_cast<int>(c / per_missing) + 1;
        choice.points.assign(static_cast<std::size_t>(k) + 1, -1);
        auto rest = c % per_missing;
        for (int g = 1; g <= k; ++g) {
            if (g == choice.missing) continue;
            choice.points[static_cast<std::size_t>(g)] = rest % radix;
            rest /= radix;
        }
        choices_.push_back(std::move(choice));
    }
}

LayeredScheme LayeredScheme::deterministic(int k) {
    if (k < 2) throw InvalidParameter("layered construction needs k >= 2");
    return LayeredScheme(k, 1, k - 1, k - 1);
}

LayeredScheme LayeredScheme::randomized(int k, std::int64_t n) {
    if (k < 2) throw InvalidParameter("layered construction needs k >= 2");
    if (n < k) throw InvalidParameter("random layered construction needs N >= k");
    return LayeredScheme(k, n, n, n);
}

std::int64_t LayeredScheme::edge_count() const noexcept {
    const auto per_pair = hub_size_ * hub_size_ + hub_size_ * fringe_size_ +
                          (k_ - 1) * hub_size_ + (k_ - 1) * fringe_size_;
    return 3 * blocks_ * blocks_ * per_pair;
}

std::size_t LayeredScheme::id(const Vertex& v) const {
    const auto offset = v.group == 0 ? v.point : hub_size_ + (v.group - 1) * fringe_size_ + v.point;
    return static_cast<std::size_t>((v.layer * blocks_ + v.block) * block_size() + offset);
}

LayeredScheme::Vertex LayeredScheme::vertex(std::size_t id) const {
    const auto raw = static_cast<std::int64_t>(id);
    if (raw < 0 || raw >= vertex_count()) throw InvalidArgument("layered vertex id out of range");
    Vertex v;
    const auto block_index = raw / block_size();
    auto offset = raw % block_size();
    v.layer = static_cast<int>(block_index / blocks_);
    v.block = block_index % blocks_;
    if (offset < hub_size_) {
        v.group = 0;
        v.point = offset;
    } else {
        offset -= hub_size_;
        v.group = static_cast<int>(offset / fringe_size_) + 1;
        v.point = offset % fringe_size_;
    }
    return v;
}

std::string LayeredScheme::name(std::size_t id) const {
    const auto v = vertex(id);
    const auto l = std::to_string(v.layer + 1);
    const auto b = std::to_string(v.block + 1);
    const auto n = std::to_string(v.point + 1);
    if (v.group == 0) return hub_size_ == 1 ? "h(" + l + "," + b + ")" : "h(" + l + "," + b + "," + n + ")";
    return "f(" + l + "," + b + "," + std::to_string(v.group) + "," + n + ")";
}

std::int64_t LayeredScheme::encode(const Choice& choice) const {
    if (choice.missing < 1 || choice.missing > k_ || choice.points.size() != static_cast<std::size_t>(k_) + 1)
        throw InvalidArgument("malformed block choice");
    std::int64_t value = 0;
    std::int64_t weight = 1;
    for (int g = 1; g <= k_; ++g) {
        if (g == choice.missing) continue;
        const auto p = choice.points[static_cast<std::size_t>(g)];
        if (p < 0 || p >= radix_) throw InvalidArgument("choice point out of range");
        value += p * weight;
        weight *= radix_;
    }
    return (choice.missing - 1) * weight + value;
}

const LayeredScheme::Choice& LayeredScheme::choice(std::int64_t block) const {
    return choices_.at(static_cast<std::size_t>(block));
}

bool LayeredScheme::forward_adjacent(int u_group, std::int64_t u_point, std::int64_t x_block,
                                     int x_group) const {
    const auto& c = choices_[static_cast<std::size_t>(x_block)];
    if (u_group == 0) return x_group == 0 || x_group == c.missing;
    if (u_group == c.missing || c.points[static_cast<std::size_t>(u_group)] != u_point) return false;
    return x_group == 0 || x_group == u_group;
}

bool LayeredScheme::adjacent(std::size_t u, std::size_t v) const {
    const auto a = vertex(u);
    const auto b = vertex(v);
    if ((a.layer + 1) % 3 == b.layer) return forward_adjacent(a.group, a.point, b.block, b.group);
    if ((b.layer + 1) % 3 == a.layer) return forward_adjacent(b.group, b.point, a.block, a.group);
    return false;
}

std::uint32_t LayeredScheme::distance(std::size_t u, std::size_t v) const {
    if (u == v) return 0;
    auto a = vertex(u);
    auto b = vertex(v);
    if (a.layer == b.layer) {
        // Common neighbor in the next layer: depends on its block and group.
        for (std::int64_t xb = 0; xb < blocks_; ++xb)
            for (int xg = 0; xg <= k_; ++xg)
                if (forward_adjacent(a.group, a.point, xb, xg) && forward_adjacent(b.group, b.point, xb, xg))
                    return 2;
        // Common neighbor in the previous layer: depends on its group and point.
        for (int yg = 0; yg <= k_; ++yg)
            for (std::int64_t yp = 0; yp < group_size(yg); ++yp)
                if (forward_adjacent(yg, yp, a.block, a.group) && forward_adjacent(yg, yp, b.block, b.group))
                    return 2;
        return 3;
    }
    if ((b.layer + 1) % 3 == a.layer) std::swap(a, b);
    // Now b is in the layer after a.
    if (forward_adjacent(a.group, a.point, b.block, b.group)) return 1;
    // A common neighbor w lies in the layer after b (= the layer before a):
    // w -> a depends on w's group/point, b -> w on w's block/group.
    for (int wg = 0; wg <= k_; ++wg) {
        bool into_a = false;
        for (std::int64_t wp = 0; wp < group_size(wg) && !into_a; ++wp)
            into_a = forward_adjacent(wg, wp, a.block, a.group);
        if (!into_a) continue;
        for (std::int64_t wb = 0; wb < blocks_; ++wb)
            if (forward_adjacent(b.group, b.point, wb, wg)) return 2;
    }
    return 3;
}

void LayeredScheme::for_each_edge(const std::function<void(std::uint32_t, std::uint32_t)>& emit) const {
    auto u32 = [](std::size_t x) { return static_cast<std::uint32_t>(x); };
    for (int layer = 0; layer < 3; ++layer) {
        const int next = (layer + 1) % 3;
        for (std::int64_t b = 0; b < blocks_; ++b)
            for (std::int64_t c = 0; c < blocks_; ++c) {
                const auto& ch = choices_[static_cast<std::size_t>(c)];
                for (std::int64_t np = 0; np < hub_size_; ++np) {
                    for (std::int64_t n = 0; n < hub_size_; ++n) emit(u32(hub(layer, b, np)), u32(hub(next, c, n)));
                    for (std::int64_t n = 0; n < fringe_size_; ++n)
                        emit(u32(hub(layer, b, np)), u32(fringe(next, c, ch.missing, n)));
                }
                for (int g = 1; g <= k_; ++g) {
                    if (g == ch.missing) continue;
                    const auto chosen = fringe(layer, b, g, ch.points[static_cast<std::size_t>(g)]);
                    for (std::int64_t n = 0; n < hub_size_; ++n) emit(u32(chosen), u32(hub(next, c, n)));
                    for (std::int64_t n = 0; n < fringe_size_; ++n) emit(u32(chosen), u32(fringe(next, c, g, n)));
                }
            }
    }
}

// ---------------------------------------------------------------- spaces

LayeredOracleMetric::LayeredOracleMetric(SpaceInfo info, LayeredScheme scheme, std::int64_t edge_cap)
    : FiniteMetric(std::move(info), static_cast<std::size_t>(scheme.vertex_count())),
      scheme_(std::move(scheme)),
      edge_cap_(edge_cap) {}

std::vector<Edge> LayeredOracleMetric::edges() const {
    if (scheme_.edge_count() > edge_cap_)
        throw TooLarge("layered graph has " + std::to_string(scheme_.edge_count()) + " edges");
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(scheme_.edge_count()));
    scheme_.for_each_edge([&](std::uint32_t u, std::uint32_t v) { out.emplace_back(u, v); });
    return out;
}

std::shared_ptr<const GraphMetric> materialize(const LayeredScheme& scheme, SpaceInfo info, LayeredLimits limits) {
    if (scheme.vertex_count() > limits.max_vertices)
        throw TooLarge("layered graph has " + std::to_string(scheme.vertex_count()) + " vertices");
    if (scheme.edge_count() > limits.max_edges)
        throw TooLarge("layered graph has " + std::to_string(scheme.edge_count()) + " edges");
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(scheme.edge_count()));
    scheme.for_each_edge([&](std::uint32_t u, std::uint32_t v) { edges.emplace_back(u, v); });
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(scheme.vertex_count()));
    for (std::size_t v = 0; v < static_cast<std::size_t>(scheme.vertex_count()); ++v) names.push_back(scheme.name(v));
    return std::make_shared<GraphMetric>(std::move(info), static_cast<std::size_t>(scheme.vertex_count()),
                                         std::move(edges), std::move(names));
}

LayeredBuild build_layered(int k, LayeredLimits limits) {
    auto scheme = LayeredScheme::deterministic(k);
    auto space = materialize(scheme, SpaceInfo{"layered", {{"k", k}}}, limits);
    return {std::move(space), std::move(scheme)};
}

RandomLayeredBuild build_layered_random(int k, std::int64_t n, bool want_materialized, LayeredLimits limits) {
    auto scheme = LayeredScheme::randomized(k, n);
    SpaceInfo info{"layered-random", {{"k", k}, {"N", n}}};
    RandomLayeredBuild out{std::make_shared<LayeredOracleMetric>(info, scheme, limits.max_edges), nullptr, scheme};
    if (want_materialized) out.materialized = materialize(scheme, info, limits);
    return out;
}

// ---------------------------------------------------------------- validators

BlockPropertyReport check_block_properties(const LayeredScheme& scheme, const GraphMetric& graph) {
    if (static_cast<std::int64_t>(graph.size()) != scheme.vertex_count())
        throw InvalidArgument("graph does not match the layered scheme");
    BlockPropertyReport report;
    const int k = scheme.k();
    const auto blocks = scheme.blocks();
    auto fail = [&](int which, const std::string& what) {
        if (report.ok()) report.first_violation = what;
        ++report.violations[which];
    };
    // counts[block * (k+1) + group]
    std::vector<std::int64_t> counts(static_cast<std::size_t>(blocks * (k + 1)), 0);
    auto slot = [&](std::int64_t block, int group) -> std::int64_t& {
        return counts[static_cast<std::size_t>(block * (k + 1) + group)];
    };

    for (std::size_t v = 0; v < graph.size(); ++v) {
        const auto self = scheme.vertex(v);
        const int next = (self.layer + 1) % 3;
        const int prev = (self.layer + 2) % 3;

        // (i): v as a vertex of the layer before blocks of layer `next`.
        std::fill(counts.begin(), counts.end(), 0);
        for (auto w : graph.neighbors(v)) {
            const auto x = scheme.vertex(w);
            if (x.layer == next && x.group != 0) slot(x.block, x.group) = 1;
        }
        for (std::int64_t b = 0; b < blocks; ++b) {
            int groups = 0;
            for (int g = 1; g <= k; ++g) groups += static_cast<int>(slot(b, g));
            ++report.checks;
            if (groups > 1) fail(0, "(i) " + scheme.name(v) + " touches " + std::to_string(groups) + " groups of block " + std::to_string(b + 1));
        }

        // (ii)/(iii): v as a vertex of the layer after blocks of layer `prev`.
        std::fill(counts.begin(), counts.end(), 0);
        for (auto w : graph.neighbors(v)) {
            const auto x = scheme.vertex(w);
            if (x.layer == prev && x.group != 0) ++slot(x.block, x.group);
        }
        for (std::int64_t b = 0; b < blocks; ++b) {
            ++report.checks;
            if (self.group != 0) {
                std::int64_t fringe = 0;
                for (int g = 1; g <= k; ++g) fringe += slot(b, g);
                if (fringe > 1) fail(1, "(ii) " + scheme.name(v) + " touches " + std::to_string(fringe) + " fringe points of block " + std::to_string(b + 1));
            } else {
                int exactly_one = 0;
                int zero = 0;
                for (int g = 1; g <= k; ++g) {
                    if (slot(b, g) == 1) ++exactly_one;
                    if (slot(b, g) == 0) ++zero;
                }
                if (exactly_one != k - 1 || zero != 1)
                    fail(2, "(iii) " + scheme.name(v) + " against block " + std::to_string(b + 1));
            }
        }
    }
    return report;
}

}  // namespace kserver
