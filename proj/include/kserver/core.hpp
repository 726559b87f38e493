#pragma once

#include "kserver/metric.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kserver {

// Labeled server positions; label i is the list index.
class Configuration {
public:
    Configuration() = default;
    explicit Configuration(std::vector<Point> positions) : positions_(std::move(positions)) {}

    std::size_t size() const noexcept { return positions_.size(); }
    const Point& operator[](std::size_t i) const { return positions_[i]; }
    Point& operator[](std::size_t i) { return positions_[i]; }
    const std::vector<Point>& positions() const noexcept { return positions_; }
    auto begin() const { return positions_.begin(); }
    auto end() const { return positions_.end(); }

    bool covers(const Point& p) const;
    // Lowest label sitting on p.
    std::optional<std::size_t> server_at(const Point& p) const;

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.positions_ == b.positions_;
    }

private:
    std::vector<Point> positions_;
};

// Sorted multiset view used as a state key.
using Multiconfig = std::vector<Point>;
Multiconfig to_multiconfig(const Configuration& c);

using Schedule = std::vector<Configuration>;

struct Instance {
    SpacePtr space;
    Configuration initial;
    std::vector<Point> requests;
};

// Every request and server lies in the space and k >= 1.
void validate_instance(const Instance& inst);

enum class CostModel { Time, Distance };

std::string_view to_string(CostModel model);
CostModel parse_cost_model(std::string_view text);

Rational step_cost(const MetricSpace& space, CostModel model, const Configuration& prev,
                   const Configuration& next);

struct Matching {
    Rational cost;
    std::vector<std::size_t> match;  // position in b assigned to a[i]
};

// Min over bijections of the largest matched distance.
Matching bottleneck_assignment(const MetricSpace& space, std::span<const Point> a, std::span<const Point> b);
Rational bottleneck_cost(const MetricSpace& space, std::span<const Point> a, std::span<const Point> b);
// Min over bijections of the summed matched distance.
Matching min_sum_assignment(const MetricSpace& space, std::span<const Point> a, std::span<const Point> b);

// Optimal unlabeled transition cost under the model.
Rational transition_cost(const MetricSpace& space, CostModel model, std::span<const Point> a,
                         std::span<const Point> b);

// Moves the labeled configuration onto the multiset `target` along an optimal
// assignment for the model.
Configuration relabel_onto(const MetricSpace& space, CostModel model, const Configuration& from,
                          std::span<const Point> target);

// Labels a sequence of multisets starting from `initial`, each step optimal.
Schedule label_schedule(const MetricSpace& space, CostModel model, const Configuration& initial,
                        const std::vector<Multiconfig>& steps);

// Throws InvalidSchedule with the first uncovered request index.
Rational schedule_cost(CostModel model, const Instance& inst, const Schedule& sched);

nlohmann::json configuration_to_json(const MetricSpace& space, const Configuration& c);
Configuration configuration_from_json(const MetricSpace& space, const nlohmann::json& value);

// {"space": <export_space>, "initial": [...], "requests": [...]}
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& doc);

}  // namespace kserver
