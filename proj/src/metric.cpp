#include "kserver/metric.hpp"

#include "kserver/errors.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace kserver {

namespace {

constexpr std::uint16_t kUnreached = std::numeric_limits<std::uint16_t>::max();

}  // namespace

std::size_t Point::index() const {
    if (!is_integer() || value_.numerator() < 0)
        throw InvalidArgument("point " + to_string(value_) + " is not a vertex index");
    return static_cast<std::size_t>(value_.numerator());
}

std::string_view to_string(SpaceKind kind) {
    switch (kind) {
        case SpaceKind::FiniteGraph: return "finite-graph";
        case SpaceKind::RationalLine: return "rational-line";
        case SpaceKind::Cycle: return "cycle";
    }
    return "unknown";
}

std::string MetricSpace::point_name(const Point& p) const { return to_string(p.value()); }

// ---------------------------------------------------------------- FiniteMetric

std::string FiniteMetric::vertex_name(std::size_t v) const { return std::to_string(v); }

Rational FiniteMetric::distance(const Point& a, const Point& b) const {
    if (!contains(a) || !contains(b))
        throw InvalidArgument("point outside the space: " + to_string(a.value()) + ", " +
                              to_string(b.value()));
    return Rational(static_cast<std::int64_t>(hops(a.index(), b.index())));
}

bool FiniteMetric::contains(const Point& p) const {
    return p.is_integer() && p.value().numerator() >= 0 &&
           static_cast<std::size_t>(p.value().numerator()) < size_;
}

std::string FiniteMetric::point_name(const Point& p) const {
    return contains(p) ? vertex_name(p.index()) : MetricSpace::point_name(p);
}

std::optional<std::size_t> FiniteMetric::find_vertex(std::string_view name) const {
    for (std::size_t v = 0; v < size_; ++v)
        if (vertex_name(v) == name) return v;
    return std::nullopt;
}

// ---------------------------------------------------------------- GraphMetric

GraphMetric::GraphMetric(SpaceInfo info, std::size_t vertex_count, std::vector<Edge> edges,
                         std::vector<std::string> names, SpaceKind kind)
    : FiniteMetric(std::move(info), vertex_count),
      kind_(kind),
      edges_(std::move(edges)),
      names_(std::move(names)) {
    if (vertex_count == 0) throw InvalidParameter("graph must have at least one vertex");
    if (!names_.empty() && names_.size() != vertex_count)
        throw InvalidParameter("vertex name count does not match vertex count");
    std::vector<std::size_t> degree(vertex_count, 0);
    for (const auto& [u, v] : edges_) {
        if (u >= vertex_count || v >= vertex_count || u == v)
            throw InvalidParameter("invalid edge {" + std::to_string(u) + "," + std::to_string(v) + "}");
        ++degree[u];
        ++degree[v];
    }
    offsets_.assign(vertex_count + 1, 0);
    for (std::size_t v = 0; v < vertex_count; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
    adjacency_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges_) {
        adjacency_[fill[u]++] = v;
        adjacency_[fill[v]++] = u;
    }
    for (std::size_t v = 0; v < vertex_count; ++v)
        std::sort(adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                  adjacency_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    if (vertex_count <= kDenseLimit) {
        rows_.resize(vertex_count);
        row_flags_ = std::make_unique<std::once_flag[]>(vertex_count);
    }
    if (!is_connected(*this)) throw InvalidParameter("graph is not connected");
}

std::span<const std::uint32_t> GraphMetric::neighbors(std::size_t v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::vector<std::uint32_t> GraphMetric::bfs(std::size_t source) const {
    std::vector<std::uint32_t> dist(size(), std::numeric_limits<std::uint32_t>::max());
    std::vector<std::uint32_t> frontier{static_cast<std::uint32_t>(source)};
    dist[source] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const auto u = frontier[head];
        for (auto w : neighbors(u)) {
            if (dist[w] != std::numeric_limits<std::uint32_t>::max()) continue;
            dist[w] = dist[u] + 1;
            frontier.push_back(w);
        }
    }
    return dist;
}

const std::vector<std::uint16_t>& GraphMetric::row(std::size_t u) const {
    std::call_once(row_flags_[u], [&] {
        const auto dist = bfs(u);
        auto& r = rows_[u];
        r.resize(dist.size());
        for (std::size_t v = 0; v < dist.size(); ++v)
            r[v] = dist[v] >= kUnreached ? kUnreached : static_cast<std::uint16_t>(dist[v]);
    });
    return rows_[u];
}

std::uint32_t GraphMetric::hops(std::size_t u, std::size_t v) const {
    if (u == v) return 0;
    if (!rows_.empty()) return row(u)[v];
    // Bounded search: stop as soon as v is settled.
    std::vector<std::uint32_t> dist(size(), std::numeric_limits<std::uint32_t>::max());
    std::queue<std::uint32_t> queue;
    dist[u] = 0;
    queue.push(static_cast<std::uint32_t>(u));
    while (!queue.empty()) {
        const auto x = queue.front();
        queue.pop();
        for (auto w : neighbors(x)) {
            if (dist[w] != std::numeric_limits<std::uint32_t>::max()) continue;
            dist[w] = dist[x] + 1;
            if (w == v) return dist[w];
            queue.push(w);
        }
    }
    return std::numeric_limits<std::uint32_t>::max();
}

std::string GraphMetric::vertex_name(std::size_t v) const {
    return names_.empty() ? std::to_string(v) : names_[v];
}

bool is_connected(const GraphMetric& graph) {
    const auto dist = graph.bfs(0);
    return std::none_of(dist.begin(), dist.end(),
                        [](auto d) { return d == std::numeric_limits<std::uint32_t>::max(); });
}

// ---------------------------------------------------------------- CycleMetric

CycleMetric::CycleMetric(std::size_t n)
    : FiniteMetric(SpaceInfo{"cycle", {{"n", n}}}, n) {}

std::uint32_t CycleMetric::hops(std::size_t u, std::size_t v) const {
    const auto diff = u > v ? u - v : v - u;
    return static_cast<std::uint32_t>(std::min(diff, size() - diff));
}

std::vector<Edge> CycleMetric::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < size(); ++i)
        out.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>((i + 1) % size()));
    return out;
}

// ---------------------------------------------------------------- LineMetric

LineMetric::LineMetric(Rational lo, Rational hi)
    : MetricSpace(SpaceInfo{"line-segment", {{"lo", to_string(lo)}, {"hi", to_string(hi)}}}),
      lo_(lo),
      hi_(hi) {
    if (!(lo < hi)) throw InvalidParameter("line segment needs lo < hi");
}

bool LineMetric::contains(const Point& p) const { return lo_ <= p.value() && p.value() <= hi_; }

Rational LineMetric::distance(const Point& a, const Point& b) const {
    if (!contains(a) || !contains(b))
        throw InvalidArgument("point outside the segment: " + to_string(a.value()) + ", " +
                              to_string(b.value()));
    return abs(a.value() - b.value());
}

// ---------------------------------------------------------------- generators

std::shared_ptr<const GraphMetric> build_clique(int n) {
    if (n < 2) throw InvalidParameter("clique needs n >= 2");
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
    return std::make_shared<GraphMetric>(SpaceInfo{"clique", {{"n", n}}}, static_cast<std::size_t>(n),
                                         std::move(edges));
}

std::shared_ptr<const CycleMetric> build_cycle(int n) {
    if (n < 4 || n % 2 != 0) throw InvalidParameter("cycle needs an even n >= 4");
    return std::make_shared<CycleMetric>(static_cast<std::size_t>(n));
}

std::shared_ptr<const GraphMetric> build_cycle_graph(int n) {
    const auto cycle = build_cycle(n);
    return std::make_shared<GraphMetric>(SpaceInfo{"cycle", {{"n", n}}}, cycle->size(), cycle->edges(),
                                         std::vector<std::string>{}, SpaceKind::Cycle);
}

std::shared_ptr<const GraphMetric> build_path(std::int64_t lo, std::int64_t hi) {
    if (hi <= lo) throw InvalidParameter("path needs lo < hi");
    const auto n = static_cast<std::size_t>(hi - lo + 1);
    std::vector<Edge> edges;
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) {
        names.push_back(std::to_string(lo + static_cast<std::int64_t>(i)));
        if (i + 1 < n) edges.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i + 1));
    }
    return std::make_shared<GraphMetric>(SpaceInfo{"path", {{"lo", lo}, {"hi", hi}}}, n, std::move(edges),
                                         std::move(names));
}

std::shared_ptr<const LineMetric> build_line_segment(Rational lo, Rational hi) {
    return std::make_shared<LineMetric>(lo, hi);
}

namespace {

void append_double_cycle(std::vector<Edge>& edges, std::vector<std::string>& names, std::size_t gadget,
                         bool suffix) {
    using double_cycle::vertex;
    for (int twin = 0; twin < 2; ++twin)
        for (int c = 0; c < 6; ++c) {
            std::string name = std::string(twin == 0 ? "A" : "B") + std::to_string(c + 1);
            if (suffix) name += "@" + std::to_string(gadget + 1);
            names.push_back(std::move(name));
        }
    for (int c = 0; c < 6; ++c) {
        const int d = (c + 1) % 6;
        for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t)
                edges.emplace_back(static_cast<std::uint32_t>(vertex(gadget, c, s)),
                                   static_cast<std::uint32_t>(vertex(gadget, d, t)));
    }
}

}  // namespace

std::shared_ptr<const GraphMetric> build_double_cycle() {
    std::vector<Edge> edges;
    std::vector<std::string> names;
    append_double_cycle(edges, names, 0, false);
    return std::make_shared<GraphMetric>(SpaceInfo{"double-cycle", nlohmann::json::object()}, 12,
                                         std::move(edges), std::move(names));
}

std::shared_ptr<const GraphMetric> build_double_cycle_chain(int k) {
    if (k < 2 || k % 2 != 0) throw InvalidParameter("double cycle chain needs an even k >= 2");
    const auto gadgets = static_cast<std::size_t>(k / 2);
    std::vector<Edge> edges;
    std::vector<std::string> names;
    for (std::size_t g = 0; g < gadgets; ++g) append_double_cycle(edges, names, g, true);
    for (std::size_t link = 0; link + 1 < gadgets; ++link) {
        std::uint32_t previous = static_cast<std::uint32_t>(double_cycle::vertex(link, 0, 1));
        for (int j = 0; j < 4; ++j) {
            const auto p = static_cast<std::uint32_t>(double_cycle::path_vertex(k, link, j));
            names.push_back("P" + std::to_string(link + 1) + "." + std::to_string(j + 1));
            edges.emplace_back(previous, p);
            previous = p;
        }
        edges.emplace_back(previous, static_cast<std::uint32_t>(double_cycle::vertex(link + 1, 3, 1)));
    }
    const auto n = names.size();
    return std::make_shared<GraphMetric>(SpaceInfo{"double-cycle-chain", {{"k", k}}}, n, std::move(edges),
                                         std::move(names));
}

// ---------------------------------------------------------------- measures

namespace {

struct Extremes {
    Rational max_distance{0};
    std::optional<Rational> min_positive;
};

Extremes finite_extremes(const FiniteMetric& space) {
    if (space.size() > GraphMetric::kDenseLimit)
        throw TooLarge("diameter of a space with " + std::to_string(space.size()) + " vertices");
    Extremes e;
    std::uint32_t max_hops = 0;
    std::uint32_t min_hops = std::numeric_limits<std::uint32_t>::max();
    for (std::size_t u = 0; u < space.size(); ++u)
        for (std::size_t v = u + 1; v < space.size(); ++v) {
            const auto h = space.hops(u, v);
            max_hops = std::max(max_hops, h);
            min_hops = std::min(min_hops, h);
        }
    e.max_distance = Rational(static_cast<std::int64_t>(max_hops));
    if (space.size() > 1) e.min_positive = Rational(static_cast<std::int64_t>(min_hops));
    return e;
}

Extremes sample_extremes(const MetricSpace& space, std::span<const Point> sample) {
    Extremes e;
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = i + 1; j < sample.size(); ++j) {
            const auto d = space.distance(sample[i], sample[j]);
            if (d > e.max_distance) e.max_distance = d;
            if (d > 0 && (!e.min_positive || d < *e.min_positive)) e.min_positive = d;
        }
    return e;
}

Extremes extremes(const MetricSpace& space, std::span<const Point> sample) {
    if (!sample.empty()) return sample_extremes(space, sample);
    if (const auto* finite = dynamic_cast<const FiniteMetric*>(&space)) return finite_extremes(*finite);
    throw Unsupported("space has an infinite point set; declare a sample");
}

}  // namespace

Rational diameter(const MetricSpace& space, std::span<const Point> sample) {
    if (sample.empty())
        if (const auto* line = dynamic_cast<const LineMetric*>(&space)) return line->hi() - line->lo();
    return extremes(space, sample).max_distance;
}

Rational aspect_ratio(const MetricSpace& space, std::span<const Point> sample) {
    const auto e = extremes(space, sample);
    if (!e.min_positive) throw Unsupported("aspect ratio needs two distinct points");
    return e.max_distance / *e.min_positive;
}

AxiomReport check_metric_axioms(const MetricSpace& space, std::span<const Point> points,
                                std::size_t triples, std::mt19937_64& rng) {
    AxiomReport report;
    if (points.empty()) return report;
    std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
    auto fail = [&](const std::string& what) {
        if (report.violations++ == 0) report.first_violation = what;
    };
    for (std::size_t t = 0; t < triples; ++t) {
        const auto& x = points[pick(rng)];
        const auto& y = points[pick(rng)];
        const auto& z = points[pick(rng)];
        const auto dxy = space.distance(x, y);
        const auto dyx = space.distance(y, x);
        const auto dxz = space.distance(x, z);
        const auto dyz = space.distance(y, z);
        if (space.distance(x, x) != 0) fail("d(x,x) != 0 at " + space.point_name(x));
        if (dxy != dyx) fail("asymmetric at " + space.point_name(x) + "," + space.point_name(y));
        if ((x == y) != (dxy == 0)) fail("positivity at " + space.point_name(x) + "," + space.point_name(y));
        if (dxz > dxy + dyz)
            fail("triangle inequality at " + space.point_name(x) + "," + space.point_name(y) + "," +
                 space.point_name(z));
        ++report.triples_checked;
    }
    return report;
}

}  // namespace kserver
