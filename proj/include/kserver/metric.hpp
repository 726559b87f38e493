#pragma once

#include "kserver/rational.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace kserver {

// A point of some metric space. Graph vertices and cycle residues are the
// nonnegative integers 0..n-1; line points are arbitrary rationals.
class Point {
public:
    Point() = default;
    explicit Point(Rational value) : value_(value) {}
    explicit Point(std::int64_t value) : value_(value) {}

    static Point vertex(std::size_t index) { return Point(static_cast<std::int64_t>(index)); }

    const Rational& value() const noexcept { return value_; }
    bool is_integer() const noexcept { return value_.denominator() == 1; }
    std::size_t index() const;

    friend bool operator==(const Point& a, const Point& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
    friend bool operator<(const Point& a, const Point& b) { return a.value_ < b.value_; }

private:
    Rational value_{0};
};

enum class SpaceKind { FiniteGraph, RationalLine, Cycle };

std::string_view to_string(SpaceKind kind);

// Generator name and parameters, carried through export/import.
struct SpaceInfo {
    std::string generator;
    nlohmann::json params = nlohmann::json::object();
};

class MetricSpace {
public:
    virtual ~MetricSpace() = default;

    virtual SpaceKind kind() const = 0;
    virtual bool contains(const Point& p) const = 0;
    virtual Rational distance(const Point& a, const Point& b) const = 0;
    virtual std::string point_name(const Point& p) const;

    const SpaceInfo& info() const noexcept { return info_; }

protected:
    explicit MetricSpace(SpaceInfo info) : info_(std::move(info)) {}

private:
    SpaceInfo info_;
};

using SpacePtr = std::shared_ptr<const MetricSpace>;

using Edge = std::pair<std::uint32_t, std::uint32_t>;

// Finite space whose points are the vertices 0..size()-1 and whose distances
// are hop counts of a connected unweighted graph.
class FiniteMetric : public MetricSpace {
public:
    std::size_t size() const noexcept { return size_; }

    virtual std::uint32_t hops(std::size_t u, std::size_t v) const = 0;
    virtual std::string vertex_name(std::size_t v) const;
    // Full edge list; implicit spaces may refuse with TooLarge.
    virtual std::vector<Edge> edges() const = 0;

    Rational distance(const Point& a, const Point& b) const override;
    bool contains(const Point& p) const override;
    std::string point_name(const Point& p) const override;

    std::optional<std::size_t> find_vertex(std::string_view name) const;

protected:
    FiniteMetric(SpaceInfo info, std::size_t size) : MetricSpace(std::move(info)), size_(size) {}

private:
    std::size_t size_;
};

using FinitePtr = std::shared_ptr<const FiniteMetric>;

// Explicit unweighted graph. BFS rows are computed lazily and cached when the
// graph has at most kDenseLimit vertices; larger graphs run a bounded BFS per
// query.
class GraphMetric final : public FiniteMetric {
public:
    static constexpr std::size_t kDenseLimit = 5000;

    GraphMetric(SpaceInfo info, std::size_t vertex_count, std::vector<Edge> edges,
                std::vector<std::string> names = {}, SpaceKind kind = SpaceKind::FiniteGraph);

    SpaceKind kind() const override { return kind_; }
    std::uint32_t hops(std::size_t u, std::size_t v) const override;
    std::string vertex_name(std::size_t v) const override;
    std::vector<Edge> edges() const override { return edges_; }

    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const std::uint32_t> neighbors(std::size_t v) const;
    std::vector<std::uint32_t> bfs(std::size_t source) const;

private:
    const std::vector<std::uint16_t>& row(std::size_t u) const;

    SpaceKind kind_;
    std::vector<Edge> edges_;
    std::vector<std::string> names_;
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> adjacency_;

    mutable std::vector<std::vector<std::uint16_t>> rows_;
    mutable std::unique_ptr<std::once_flag[]> row_flags_;
};

// The cycle on n vertices with arc-length distances; points are residues.
class CycleMetric final : public FiniteMetric {
public:
    explicit CycleMetric(std::size_t n);

    SpaceKind kind() const override { return SpaceKind::Cycle; }
    std::uint32_t hops(std::size_t u, std::size_t v) const override;
    std::vector<Edge> edges() const override;
};

// Closed segment [lo, hi] of the rational line.
class LineMetric final : public MetricSpace {
public:
    LineMetric(Rational lo, Rational hi);

    SpaceKind kind() const override { return SpaceKind::RationalLine; }
    bool contains(const Point& p) const override;
    Rational distance(const Point& a, const Point& b) const override;

    const Rational& lo() const noexcept { return lo_; }
    const Rational& hi() const noexcept { return hi_; }

private:
    Rational lo_;
    Rational hi_;
};

std::shared_ptr<const GraphMetric> build_clique(int n);
std::shared_ptr<const CycleMetric> build_cycle(int n);
// The same cycle as an explicit edge list.
std::shared_ptr<const GraphMetric> build_cycle_graph(int n);
// Path on the integer points lo..hi; vertex names are the coordinates.
std::shared_ptr<const GraphMetric> build_path(std::int64_t lo, std::int64_t hi);
std::shared_ptr<const LineMetric> build_line_segment(Rational lo, Rational hi);

// Vertices A_1..A_6 are 0..5 and B_1..B_6 are 6..11.
std::shared_ptr<const GraphMetric> build_double_cycle();

// k/2 double-cycle gadgets (gadget i owns vertices 12i..12i+11, same layout as
// build_double_cycle) followed by the 4-vertex linking paths.
std::shared_ptr<const GraphMetric> build_double_cycle_chain(int k);

namespace double_cycle {
// column in 0..5 (A_{c+1} / B_{c+1}), twin 0 for A and 1 for B.
inline std::size_t vertex(std::size_t gadget, int column, int twin) {
    return gadget * 12 + static_cast<std::size_t>(twin) * 6 + static_cast<std::size_t>(column);
}
inline int column_of(std::size_t v) { return static_cast<int>(v % 12 % 6); }
inline std::size_t gadget_of(std::size_t v) { return v / 12; }
// Vertex j in 0..3 of the path linking gadget i to gadget i+1; j = 0 touches B_1 of gadget i.
inline std::size_t path_vertex(int k, std::size_t link, int j) {
    return static_cast<std::size_t>(k / 2) * 12 + link * 4 + static_cast<std::size_t>(j);
}
}  // namespace double_cycle

// Exact diameter and aspect ratio. Line segments need a declared sample.
Rational diameter(const MetricSpace& space, std::span<const Point> sample = {});
Rational aspect_ratio(const MetricSpace& space, std::span<const Point> sample = {});

struct AxiomReport {
    std::size_t triples_checked = 0;
    std::size_t violations = 0;
    std::string first_violation;
};

// Identity, symmetry, positivity and triangle inequality on random triples.
AxiomReport check_metric_axioms(const MetricSpace& space, std::span<const Point> points,
                                std::size_t triples, std::mt19937_64& rng);

bool is_connected(const GraphMetric& graph);

nlohmann::json export_graph(const FiniteMetric& space);
nlohmann::json export_space(const MetricSpace& space);
// Rebuilds a space exported by export_space.
SpacePtr import_space(const nlohmann::json& doc);

nlohmann::json point_to_json(const MetricSpace& space, const Point& p);
Point point_from_json(const MetricSpace& space, const nlohmann::json& value);

}  // namespace kserver
