#include "kserver/offline.hpp"

#include "kserver/assignment.hpp"
#include "kserver/errors.hpp"

#include <algorithm>
#include <limits>

namespace kserver {

namespace {

std::int64_t multiset_count(std::size_t n, std::size_t k, std::int64_t cap) {
    // C(n + k - 1, k), stopping once it exceeds cap.
    long double value = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        value = value * static_cast<long double>(n + k - i) / static_cast<long double>(i);
        if (value > static_cast<long double>(cap)) return cap + 1;
    }
    return static_cast<std::int64_t>(value + 0.5L);
}

}  // namespace

MulticonfigSpace::MulticonfigSpace(FinitePtr space, std::size_t k, CostModel model, std::int64_t state_cap)
    : space_(std::move(space)), k_(k), model_(model) {
    if (k_ == 0) throw InvalidArgument("need at least one server");
    const auto n = space_->size();
    const auto count = multiset_count(n, k_, state_cap);
    if (count > state_cap)
        throw TooLarge("C(" + std::to_string(n + k_ - 1) + "," + std::to_string(k_) +
                       ") multiconfigurations exceed the state cap " + std::to_string(state_cap));
    states_.reserve(static_cast<std::size_t>(count) * k_);
    covering_.resize(n);
    std::vector<std::uint32_t> cur(k_, 0);
    for (;;) {
        const auto s = static_cast<std::uint32_t>(states_.size() / k_);
        states_.insert(states_.end(), cur.begin(), cur.end());
        for (std::size_t i = 0; i < k_; ++i)
            if (i == 0 || cur[i] != cur[i - 1]) covering_[cur[i]].push_back(s);
        std::size_t i = k_;
        while (i > 0 && cur[i - 1] + 1 == n) --i;
        if (i == 0) break;
        const auto next = cur[i - 1] + 1;
        for (std::size_t j = i - 1; j < k_; ++j) cur[j] = next;
    }
    const auto s = static_cast<std::int64_t>(size());
    if (s <= state_cap / std::max<std::int64_t>(s, 1)) {
        table_.resize(static_cast<std::size_t>(s * s));
        for (std::size_t a = 0; a < size(); ++a)
            for (std::size_t b = a; b < size(); ++b) {
                const auto t = static_cast<std::int32_t>(compute_transition(a, b));
                table_[a * size() + b] = t;
                table_[b * size() + a] = t;
            }
    }
}

Multiconfig MulticonfigSpace::multiconfig(std::size_t s) const {
    Multiconfig m;
    for (auto v : state(s)) m.push_back(Point::vertex(v));
    return m;
}

std::size_t MulticonfigSpace::rank(std::span<const std::uint32_t> sorted_vertices) const {
    if (sorted_vertices.size() != k_) throw InvalidArgument("multiconfiguration has the wrong size");
    std::size_t lo = 0;
    std::size_t hi = size();
    while (lo < hi) {
        const auto mid = (lo + hi) / 2;
        const auto s = state(mid);
        if (std::lexicographical_compare(s.begin(), s.end(), sorted_vertices.begin(), sorted_vertices.end()))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == size() || !std::equal(sorted_vertices.begin(), sorted_vertices.end(), state(lo).begin()))
        throw InvalidArgument("not a multiconfiguration of this space");
    return lo;
}

std::size_t MulticonfigSpace::rank(const Configuration& c) const {
    std::vector<std::uint32_t> v;
    for (const auto& p : c) {
        if (!space_->contains(p)) throw InvalidArgument("point outside the space");
        v.push_back(static_cast<std::uint32_t>(p.index()));
    }
    std::sort(v.begin(), v.end());
    return rank(v);
}

std::int64_t MulticonfigSpace::compute_transition(std::size_t a, std::size_t b) const {
    const auto sa = state(a);
    const auto sb = state(b);
    std::vector<std::int64_t> cost(k_ * k_);
    for (std::size_t i = 0; i < k_; ++i)
        for (std::size_t j = 0; j < k_; ++j) cost[i * k_ + j] = space_->hops(sa[i], sb[j]);
    return model_ == CostModel::Time ? bottleneck_assignment(cost, k_).cost : min_sum_assignment(cost, k_).cost;
}

std::int64_t MulticonfigSpace::transition(std::size_t a, std::size_t b) const {
    if (!table_.empty()) return table_[a * size() + b];
    return compute_transition(a, b);
}

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

FinitePtr finite_space(const Instance& inst) {
    auto finite = std::dynamic_pointer_cast<const FiniteMetric>(inst.space);
    if (!finite) throw Unsupported("exact optimum needs a finite space");
    return finite;
}

std::size_t request_vertex(const Instance& inst, std::size_t t) {
    if (!inst.space->contains(inst.requests[t])) throw InvalidArgument("request outside the space");
    return inst.requests[t].index();
}

Schedule map_back(const Discretized& d, const Schedule& sched) {
    Schedule out;
    for (const auto& c : sched) {
        std::vector<Point> pos;
        for (const auto& p : c) pos.emplace_back(static_cast<std::int64_t>(p.index()) + d.offset);
        out.emplace_back(std::move(pos));
    }
    return out;
}

}  // namespace

OptResult opt_cost_dp(const Instance& inst, CostModel model, std::int64_t state_cap) {
    validate_instance(inst);
    if (inst.space->kind() == SpaceKind::RationalLine) {
        const auto d = discretize_line(inst);
        auto result = opt_cost_dp(d.instance, model, state_cap);
        result.schedule = map_back(d, result.schedule);
        return result;
    }
    const auto space = finite_space(inst);
    const MulticonfigSpace states(space, inst.initial.size(), model, state_cap);

    OptResult result;
    std::vector<std::uint32_t> prev_states{static_cast<std::uint32_t>(states.rank(inst.initial))};
    std::vector<std::int64_t> prev_cost{0};
    std::vector<std::vector<std::uint32_t>> parents;
    std::vector<const std::vector<std::uint32_t>*> layers;
    parents.reserve(inst.requests.size());
    result.states_explored = 1;

    for (std::size_t t = 0; t < inst.requests.size(); ++t) {
        const auto& layer = states.covering(request_vertex(inst, t));
        const auto work = static_cast<std::int64_t>(prev_states.size()) * static_cast<std::int64_t>(layer.size());
        if (work > state_cap)
            throw TooLarge("step " + std::to_string(t) + " needs " + std::to_string(work) +
                           " transitions, above the state cap " + std::to_string(state_cap));
        std::vector<std::int64_t> cost(layer.size(), kInf);
        std::vector<std::uint32_t> parent(layer.size(), 0);
        for (std::size_t i = 0; i < layer.size(); ++i)
            for (std::size_t p = 0; p < prev_states.size(); ++p) {
                const auto c = prev_cost[p] + states.transition(prev_states[p], layer[i]);
                if (c < cost[i]) {
                    cost[i] = c;
                    parent[i] = static_cast<std::uint32_t>(p);
                }
            }
        result.states_explored += static_cast<std::int64_t>(layer.size());
        parents.push_back(std::move(parent));
        layers.push_back(&layer);
        prev_states = layer;
        prev_cost = std::move(cost);
    }

    if (inst.requests.empty()) return result;
    const auto best = static_cast<std::size_t>(std::min_element(prev_cost.begin(), prev_cost.end()) - prev_cost.begin());
    result.cost = Rational(prev_cost[best]);

    std::vector<Multiconfig> path(inst.requests.size());
    std::size_t index = best;
    for (std::size_t t = inst.requests.size(); t-- > 0;) {
        path[t] = states.multiconfig((*layers[t])[index]);
        index = parents[t][index];
    }
    result.schedule = label_schedule(*space, model, inst.initial, path);
    return result;
}

Rational WorkFunctionTable::minimum(std::size_t t) const {
    return Rational(*std::min_element(values[t].begin(), values[t].end()));
}

std::vector<std::int64_t> work_function_step(const MulticonfigSpace& states, const std::vector<std::int64_t>& prev,
                                             std::size_t request_vertex) {
    const auto& cover = states.covering(request_vertex);
    std::vector<std::int64_t> next(states.size(), kInf);
    for (std::size_t c = 0; c < states.size(); ++c)
        for (auto d : cover) next[c] = std::min(next[c], prev[d] + states.transition(d, c));
    return next;
}

WorkFunctionTable work_function(const Instance& inst, CostModel model, std::int64_t state_cap) {
    validate_instance(inst);
    const auto space = finite_space(inst);
    auto states = std::make_shared<const MulticonfigSpace>(space, inst.initial.size(), model, state_cap);
    const auto s = static_cast<std::int64_t>(states->size());
    if (s > state_cap / s)
        throw TooLarge("work function needs " + std::to_string(s) + "^2 transitions per step");
    WorkFunctionTable table;
    table.states = states;
    const auto start = states->rank(inst.initial);
    std::vector<std::int64_t> w0(states->size());
    for (std::size_t c = 0; c < states->size(); ++c) w0[c] = states->transition(start, c);
    table.values.push_back(std::move(w0));
    for (std::size_t t = 0; t < inst.requests.size(); ++t)
        table.values.push_back(work_function_step(*states, table.values.back(), request_vertex(inst, t)));
    return table;
}

Rational verify_schedule(const Instance& inst, const Schedule& sched, CostModel model) {
    return schedule_cost(model, inst, sched);
}

Discretized discretize_line(const Instance& inst, std::int64_t radius) {
    if (inst.space->kind() != SpaceKind::RationalLine) throw Unsupported("not a line instance");
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    auto touch = [&](const Point& p) {
        if (!p.is_integer()) throw Unsupported("line instance has a non-integer point " + to_string(p.value()));
        lo = std::min(lo, p.value().numerator());
        hi = std::max(hi, p.value().numerator());
    };
    for (const auto& p : inst.initial) touch(p);
    for (const auto& r : inst.requests) touch(r);
    Discretized d;
    d.offset = lo - radius;
    d.instance.space = build_path(lo - radius, hi + radius);
    auto map = [&](const Point& p) { return Point(p.value().numerator() - d.offset); };
    std::vector<Point> initial;
    for (const auto& p : inst.initial) initial.push_back(map(p));
    d.instance.initial = Configuration(std::move(initial));
    for (const auto& r : inst.requests) d.instance.requests.push_back(map(r));
    return d;
}

}  // namespace kserver
