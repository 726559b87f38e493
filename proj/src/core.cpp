#include "kserver/core.hpp"

#include "kserver/assignment.hpp"
#include "kserver/errors.hpp"

#include <algorithm>

namespace kserver {

bool Configuration::covers(const Point& p) const { return server_at(p).has_value(); }

std::optional<std::size_t> Configuration::server_at(const Point& p) const {
    for (std::size_t i = 0; i < positions_.size(); ++i)
        if (positions_[i] == p) return i;
    return std::nullopt;
}

Multiconfig to_multiconfig(const Configuration& c) {
    Multiconfig m(c.begin(), c.end());
    std::sort(m.begin(), m.end());
    return m;
}

void validate_instance(const Instance& inst) {
    if (!inst.space) throw InvalidArgument("instance has no space");
    if (inst.initial.size() == 0) throw InvalidArgument("instance needs at least one server");
    for (const auto& p : inst.initial)
        if (!inst.space->contains(p)) throw InvalidArgument("initial server outside the space");
    for (const auto& r : inst.requests)
        if (!inst.space->contains(r)) throw InvalidArgument("request outside the space");
}

std::string_view to_string(CostModel model) { return model == CostModel::Time ? "time" : "distance"; }

CostModel parse_cost_model(std::string_view text) {
    if (text == "time") return CostModel::Time;
    if (text == "distance") return CostModel::Distance;
    throw InvalidParameter("unknown cost model '" + std::string(text) + "'");
}

Rational step_cost(const MetricSpace& space, CostModel model, const Configuration& prev,
                   const Configuration& next) {
    if (prev.size() != next.size()) throw InvalidArgument("configurations have different sizes");
    Rational total{0};
    for (std::size_t i = 0; i < prev.size(); ++i) {
        const auto d = space.distance(prev[i], next[i]);
        if (model == CostModel::Time)
            total = std::max(total, d);
        else
            total += d;
    }
    return total;
}

namespace {

std::vector<Rational> cost_matrix(const MetricSpace& space, std::span<const Point> a, std::span<const Point> b) {
    if (a.size() != b.size()) throw InvalidArgument("configurations have different sizes");
    std::vector<Rational> cost;
    cost.reserve(a.size() * b.size());
    for (const auto& p : a)
        for (const auto& q : b) cost.push_back(space.distance(p, q));
    return cost;
}

}  // namespace

Matching bottleneck_assignment(const MetricSpace& space, std::span<const Point> a, std::span<const Point> b) {
    auto result = kserver::bottleneck_assignment(cost_matrix(space, a, b), a.size());
    return {result.cost, std::move(result.match)};
}

Rational bottleneck_cost(const MetricSpace& space, std::span<const Point> a, std::span<const Point> b) {
    return bottleneck_assignment(space, a, b).cost;
}

Matching min_sum_assignment(const MetricSpace& space, std::span<const Point> a, std::span<const Point> b) {
    auto result = kserver::min_sum_assignment(cost_matrix(space, a, b), a.size());
    return {result.cost, std::move(result.match)};
}

Rational transition_cost(const MetricSpace& space, CostModel model, std::span<const Point> a,
                         std::span<const Point> b) {
    return model == CostModel::Time ? bottleneck_cost(space, a, b) : min_sum_assignment(space, a, b).cost;
}

Configuration relabel_onto(const MetricSpace& space, CostModel model, const Configuration& from,
                          std::span<const Point> target) {
    const auto& pos = from.positions();
    auto cost = cost_matrix(space, pos, target);
    if (model == CostModel::Time) {
        // Among bottleneck-optimal bijections take one of least total movement.
        const auto limit = kserver::bottleneck_assignment(cost, pos.size()).cost;
        Rational blocked{1};
        for (const auto& c : cost) blocked += c;
        for (auto& c : cost)
            if (c > limit) c = blocked;
    }
    const auto m = kserver::min_sum_assignment(cost, pos.size());
    std::vector<Point> out(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) out[i] = target[m.match[i]];
    return Configuration(std::move(out));
}

Schedule label_schedule(const MetricSpace& space, CostModel model, const Configuration& initial,
                        const std::vector<Multiconfig>& steps) {
    Schedule out;
    out.reserve(steps.size());
    const Configuration* current = &initial;
    for (const auto& target : steps) {
        if (!out.empty() && to_multiconfig(out.back()) == target)
            out.push_back(out.back());
        else
            out.push_back(relabel_onto(space, model, *current, target));
        current = &out.back();
    }
    return out;
}

Rational schedule_cost(CostModel model, const Instance& inst, const Schedule& sched) {
    if (sched.size() != inst.requests.size())
        throw InvalidSchedule(std::min(sched.size(), inst.requests.size()),
                              "schedule has " + std::to_string(sched.size()) + " configurations for " +
                                  std::to_string(inst.requests.size()) + " requests");
    Rational total{0};
    const Configuration* prev = &inst.initial;
    for (std::size_t j = 0; j < sched.size(); ++j) {
        if (sched[j].size() != inst.initial.size())
            throw InvalidSchedule(j, "configuration " + std::to_string(j) + " has the wrong size");
        if (!sched[j].covers(inst.requests[j]))
            throw InvalidSchedule(j, "configuration " + std::to_string(j) + " misses request " +
                                         inst.space->point_name(inst.requests[j]));
        total += step_cost(*inst.space, model, *prev, sched[j]);
        prev = &sched[j];
    }
    return total;
}

nlohmann::json configuration_to_json(const MetricSpace& space, const Configuration& c) {
    auto out = nlohmann::json::array();
    for (const auto& p : c) out.push_back(point_to_json(space, p));
    return out;
}

Configuration configuration_from_json(const MetricSpace& space, const nlohmann::json& value) {
    if (!value.is_array()) throw InvalidParameter("configuration must be an array");
    std::vector<Point> pos;
    for (const auto& p : value) pos.push_back(point_from_json(space, p));
    return Configuration(std::move(pos));
}

nlohmann::json instance_to_json(const Instance& inst) {
    auto requests = nlohmann::json::array();
    for (const auto& r : inst.requests) requests.push_back(point_to_json(*inst.space, r));
    return {{"space", export_space(*inst.space)},
            {"initial", configuration_to_json(*inst.space, inst.initial)},
            {"requests", std::move(requests)}};
}

Instance instance_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("space") || !doc.contains("initial") || !doc.contains("requests"))
        throw InvalidParameter("instance needs 'space', 'initial' and 'requests'");
    Instance inst;
    inst.space = import_space(doc.at("space"));
    inst.initial = configuration_from_json(*inst.space, doc.at("initial"));
    for (const auto& r : doc.at("requests")) inst.requests.push_back(point_from_json(*inst.space, r));
    validate_instance(inst);
    return inst;
}

}  // namespace kserver
