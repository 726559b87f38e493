#include "kserver/errors.hpp"
#include "kserver/metric.hpp"

namespace kserver {

nlohmann::json export_graph(const FiniteMetric& space) {
    nlohmann::json doc;
    doc["kind"] = std::string(to_string(space.kind()));
    doc["generator"] = space.info().generator;
    doc["params"] = space.info().params;
    auto names = nlohmann::json::array();
    for (std::size_t v = 0; v < space.size(); ++v) names.push_back(space.vertex_name(v));
    doc["vertices"] = std::move(names);
    auto edges = nlohmann::json::array();
    for (const auto& [u, v] : space.edges()) edges.push_back({u, v});
    doc["edges"] = std::move(edges);
    return doc;
}

nlohmann::json export_space(const MetricSpace& space) {
    if (const auto* finite = dynamic_cast<const FiniteMetric*>(&space)) return export_graph(*finite);
    const auto& line = dynamic_cast<const LineMetric&>(space);
    return {{"kind", std::string(to_string(space.kind()))},
            {"generator", space.info().generator},
            {"params", {{"lo", to_string(line.lo())}, {"hi", to_string(line.hi())}}}};
}

SpacePtr import_space(const nlohmann::json& doc) {
    try {
        const auto kind = doc.at("kind").get<std::string>();
        SpaceInfo info{doc.value("generator", std::string("imported")),
                       doc.value("params", nlohmann::json::object())};
        if (kind == "rational-line") {
            const auto& params = doc.at("params");
            return build_line_segment(parse_rational(params.at("lo").get<std::string>()),
                                      parse_rational(params.at("hi").get<std::string>()));
        }
        SpaceKind space_kind;
        if (kind == "finite-graph")
            space_kind = SpaceKind::FiniteGraph;
        else if (kind == "cycle")
            space_kind = SpaceKind::Cycle;
        else
            throw InvalidParameter("unknown space kind '" + kind + "'");
        auto names = doc.at("vertices").get<std::vector<std::string>>();
        std::vector<Edge> edges;
        for (const auto& e : doc.at("edges")) edges.emplace_back(e.at(0).get<std::uint32_t>(), e.at(1).get<std::uint32_t>());
        const auto n = names.size();
        return std::make_shared<GraphMetric>(std::move(info), n, std::move(edges), std::move(names), space_kind);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidParameter(std::string("malformed space document: ") + e.what());
    }
}

nlohmann::json point_to_json(const MetricSpace& space, const Point& p) {
    if (dynamic_cast<const FiniteMetric*>(&space) != nullptr) return p.index();
    return to_string(p.value());
}

Point point_from_json(const MetricSpace& space, const nlohmann::json& value) {
    const auto* finite = dynamic_cast<const FiniteMetric*>(&space);
    Point p;
    if (value.is_number_integer()) {
        p = Point(value.get<std::int64_t>());
    } else if (value.is_string()) {
        const auto text = value.get<std::string>();
        if (finite != nullptr) {
            if (const auto v = finite->find_vertex(text)) return Point::vertex(*v);
        }
        p = Point(parse_rational(text));
    } else {
        throw InvalidParameter("point must be an integer or a string");
    }
    if (!space.contains(p)) throw InvalidParameter("point " + to_string(p.value()) + " is outside the space");
    return p;
}

}  // namespace kserver
