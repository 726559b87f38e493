#include "kserver/algorithms.hpp"

#include "kserver/errors.hpp"

#include <algorithm>
#include <limits>

namespace kserver {

void OnlineAlgorithm::init(SpacePtr space, Configuration initial) {
    if (!space) throw InvalidArgument("algorithm needs a space");
    if (initial.size() == 0) throw InvalidArgument("algorithm needs at least one server");
    for (const auto& p : initial)
        if (!space->contains(p)) throw InvalidArgument("initial server outside the space");
    space_ = std::move(space);
    config_ = std::move(initial);
}

// ---------------------------------------------------------------- Robin

void Robin::init(SpacePtr space, Configuration initial) {
    OnlineAlgorithm::init(std::move(space), std::move(initial));
    moves_ = 0;
    last_ = 0;
}

const Configuration& Robin::serve(const Point& request) {
    if (config_.covers(request)) return config_;
    ++moves_;
    last_ = (moves_ - 1) % config_.size();
    config_[last_] = request;
    return config_;
}

// ---------------------------------------------------------------- Greedy

const Configuration& Greedy::serve(const Point& request) {
    if (config_.covers(request)) return config_;
    std::size_t best = 0;
    auto best_d = space_->distance(config_[0], request);
    for (std::size_t i = 1; i < config_.size(); ++i) {
        const auto d = space_->distance(config_[i], request);
        if (d < best_d) {
            best = i;
            best_d = d;
        }
    }
    config_[best] = request;
    return config_;
}

// ---------------------------------------------------------------- DC on the line

void DoubleCoverageLine::init(SpacePtr space, Configuration initial) {
    if (space && space->kind() != SpaceKind::RationalLine)
        throw Unsupported("dc-line runs only on the rational line");
    OnlineAlgorithm::init(std::move(space), std::move(initial));
}

const Configuration& DoubleCoverageLine::serve(const Point& request) {
    if (config_.covers(request)) return config_;
    const auto& x = request.value();
    std::optional<std::size_t> left;
    std::optional<std::size_t> right;
    for (std::size_t i = 0; i < config_.size(); ++i) {
        const auto& p = config_[i].value();
        if (p < x && (!left || config_[*left].value() < p)) left = i;
        if (x < p && (!right || p < config_[*right].value())) right = i;
    }
    if (left && right) {
        const auto step = std::min(x - config_[*left].value(), config_[*right].value() - x);
        config_[*left] = Point(config_[*left].value() + step);
        config_[*right] = Point(config_[*right].value() - step);
    } else {
        config_[left ? *left : *right] = request;
    }
    return config_;
}

// ---------------------------------------------------------------- WFA (time)

void WorkFunctionTime::init(SpacePtr space, Configuration initial) {
    auto finite = std::dynamic_pointer_cast<const FiniteMetric>(space);
    if (!finite) throw Unsupported("wfa-time needs a finite space");
    OnlineAlgorithm::init(std::move(space), std::move(initial));
    states_ = std::make_shared<const MulticonfigSpace>(finite, config_.size(), CostModel::Time, state_cap_);
    const auto s = static_cast<std::int64_t>(states_->size());
    if (s > state_cap_ / s) throw TooLarge("wfa-time needs " + std::to_string(s) + "^2 transitions per step");
    current_ = states_->rank(config_);
    work_.resize(states_->size());
    for (std::size_t c = 0; c < states_->size(); ++c) work_[c] = states_->transition(current_, c);
}

const Configuration& WorkFunctionTime::serve(const Point& request) {
    if (!space_->contains(request)) throw InvalidArgument("request outside the space");
    work_ = work_function_step(*states_, work_, request.index());
    std::size_t best = current_;
    // A covering current state wins ties.
    auto best_value = config_.covers(request) ? work_[current_] : std::numeric_limits<std::int64_t>::max();
    for (auto x : states_->covering(request.index())) {
        const auto value = work_[x] + states_->transition(current_, x);
        if (value < best_value) {
            best_value = value;
            best = x;
        }
    }
    if (best != current_) {
        const auto target = states_->multiconfig(best);
        config_ = relabel_onto(*space_, CostModel::Time, config_, target);
        current_ = best;
    }
    return config_;
}

// ---------------------------------------------------------------- registry

std::unique_ptr<OnlineAlgorithm> make_algorithm(std::string_view key) {
    if (key == "robin") return std::make_unique<Robin>();
    if (key == "greedy") return std::make_unique<Greedy>();
    if (key == "dc-line") return std::make_unique<DoubleCoverageLine>();
    if (key == "wfa-time") return std::make_unique<WorkFunctionTime>();
    throw InvalidParameter("unknown algorithm '" + std::string(key) + "'");
}

std::vector<std::string> algorithm_keys() { return {"robin", "greedy", "dc-line", "wfa-time"}; }

}  // namespace kserver
