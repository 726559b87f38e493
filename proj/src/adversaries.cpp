#include "kserver/adversaries.hpp"

#include "kserver/errors.hpp"

#include <algorithm>
#include <set>

namespace kserver {

Adversary::Adversary(SpacePtr space, Configuration initial, std::size_t phase_limit, bool enforce)
    : space_(std::move(space)), initial_(std::move(initial)), phase_limit_(phase_limit), enforce_(enforce) {
    for (const auto& p : initial_)
        if (!space_->contains(p)) throw InvalidParameter("start configuration leaves the space");
}

AdversaryEvent Adversary::next(const Configuration& alg) {
    if (!in_phase_) {
        if (targets_.size() >= phase_limit_) return {AdversaryEvent::Kind::Done, Point()};
        in_phase_ = true;
        gave_up_ = false;
        phase_rerequests_ = 0;
        phase_points_.clear();
        start_phase(alg);
    }
    auto emit = [&](const Point& p) {
        requests_.push_back(p);
        request_phase_.push_back(targets_.size());
        return AdversaryEvent{AdversaryEvent::Kind::Request, p};
    };
    if (auto again = enforce(alg)) {
        ++phase_rerequests_;
        ++rerequests_total_;
        return emit(*again);
    }
    if (auto fresh = fresh_request(alg)) {
        if (!requested_in_phase(*fresh)) phase_points_.push_back(*fresh);
        return emit(*fresh);
    }
    targets_.push_back(finish_phase(alg));
    in_phase_ = false;
    return {AdversaryEvent::Kind::PhaseEnd, Point()};
}

std::optional<Point> Adversary::enforce(const Configuration& alg) {
    if (!enforce_ || gave_up_) return std::nullopt;
    for (const auto& p : phase_points_) {
        if (alg.covers(p)) continue;
        if (phase_rerequests_ >= rerequest_cap(k())) {
            gave_up_ = true;
            flag_current_phase();
            return std::nullopt;
        }
        return p;
    }
    return std::nullopt;
}

void Adversary::flag_current_phase() {
    if (!current_phase_flagged()) flagged_.push_back(targets_.size());
}

bool Adversary::current_phase_flagged() const {
    return !flagged_.empty() && flagged_.back() == targets_.size();
}

bool Adversary::requested_in_phase(const Point& p) const {
    return std::find(phase_points_.begin(), phase_points_.end(), p) != phase_points_.end();
}

Instance Adversary::instance() const { return Instance{space_, initial_, requests_}; }

Schedule Adversary::certificate() const {
    std::vector<Multiconfig> steps;
    steps.reserve(requests_.size());
    for (auto phase : request_phase_) {
        if (phase >= targets_.size()) throw InternalError("certificate requested inside an open phase");
        steps.push_back(targets_[phase]);
    }
    return label_schedule(*space_, CostModel::Time, initial_, steps);
}

Rational Adversary::promised_certificate_cost() const {
    return Rational(static_cast<std::int64_t>(completed_phases()));
}

Rational distance_to_config(const MetricSpace& space, const Point& p, const Configuration& c) {
    Rational best = space.distance(p, c[0]);
    for (std::size_t i = 1; i < c.size(); ++i) best = std::min(best, space.distance(p, c[i]));
    return best;
}

// ---------------------------------------------------------------- uniform

namespace {

Configuration first_k(const std::vector<std::size_t>& subset) {
    std::vector<Point> pos;
    for (std::size_t i = 0; i + 1 < subset.size(); ++i) pos.push_back(Point::vertex(subset[i]));
    return Configuration(std::move(pos));
}

bool induced_connected(const FiniteMetric& g, const std::vector<std::size_t>& subset) {
    std::vector<char> seen(subset.size(), 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const auto i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < subset.size(); ++j)
            if (!seen[j] && g.hops(subset[i], subset[j]) == 1) {
                seen[j] = 1;
                stack.push_back(j);
            }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

std::vector<std::size_t> checked_subset(const FiniteMetric& g, std::vector<std::size_t> subset) {
    std::sort(subset.begin(), subset.end());
    if (subset.size() < 2 || std::adjacent_find(subset.begin(), subset.end()) != subset.end())
        throw InvalidParameter("uniform adversary needs k+1 >= 2 distinct vertices");
    if (subset.back() >= g.size()) throw InvalidParameter("subset vertex outside the graph");
    if (!induced_connected(g, subset)) throw InvalidParameter("subset does not induce a connected subgraph");
    return subset;
}

}  // namespace

UniformAdversary::UniformAdversary(FinitePtr space, std::vector<std::size_t> subset, std::size_t phases)
    : Adversary(space, first_k(checked_subset(*space, subset)), phases, false),
      graph_(std::move(space)),
      subset_(checked_subset(*graph_, std::move(subset))),
      hole_(subset_.back()) {}

void UniformAdversary::start_phase(const Configuration&) { issued_ = 0; }

std::optional<Point> UniformAdversary::fresh_request(const Configuration& alg) {
    if (issued_ == k()) return std::nullopt;
    for (auto v : subset_) {
        const auto p = Point::vertex(v);
        if (!alg.covers(p)) {
            ++issued_;
            return p;
        }
    }
    throw InternalError("algorithm covers all k+1 vertices with k servers");
}

Multiconfig UniformAdversary::finish_phase(const Configuration&) {
    auto in_block = [&](std::size_t v) { return requested_in_phase(Point::vertex(v)); };
    if (in_block(hole_)) {
        hole_ = *std::find_if(subset_.begin(), subset_.end(), [&](std::size_t v) { return !in_block(v); });
    }
    Multiconfig target;
    for (auto v : subset_)
        if (v != hole_) target.push_back(Point::vertex(v));
    return target;
}

// ---------------------------------------------------------------- strict line

namespace {

std::shared_ptr<const LineMetric> pair_line(int k) {
    if (k < 2 || k % 2 != 0) throw InvalidParameter("pair constructions need an even k >= 2");
    const auto d = StrictLineAdversary::spacing(k);
    return build_line_segment(Rational(0), Rational((k / 2 + 1) * d));
}

Configuration pair_start(int k) {
    std::vector<Point> pos;
    const auto d = StrictLineAdversary::spacing(k);
    for (int i = 1; i <= k / 2; ++i) {
        pos.emplace_back(i * d - 1);
        pos.emplace_back(i * d + 1);
    }
    return Configuration(std::move(pos));
}

}  // namespace

StrictLineAdversary::StrictLineAdversary(int k) : Adversary(pair_line(k), pair_start(k), 1, false), k_(k) {}

void StrictLineAdversary::start_phase(const Configuration&) {
    pair_ = 0;
    stage_ = 0;
    chosen_.clear();
}

std::optional<Point> StrictLineAdversary::fresh_request(const Configuration& alg) {
    if (pair_ == static_cast<std::size_t>(k_ / 2)) return std::nullopt;
    const Rational c(static_cast<std::int64_t>(pair_ + 1) * spacing(k_));
    // Mirrored frame: actual = c + sign * relative.
    auto actual = [&](std::int64_t rel) { return Point(c + Rational(sign_ * rel)); };
    auto rel_of = [&](const Point& p) { return (p.value() - c) * Rational(sign_); };

    if (stage_ == 0) {
        std::vector<std::size_t> order(alg.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return abs(alg[a].value() - c) < abs(alg[b].value() - c);
        });
        tracked_[0] = order[0];
        tracked_[1] = order.size() > 1 ? order[1] : order[0];
        auto x = alg[tracked_[0]].value() - c;
        auto y = alg[tracked_[1]].value() - c;
        if (abs(x) > abs(y)) {
            std::swap(x, y);
            std::swap(tracked_[0], tracked_[1]);
        }
        sign_ = y < 0 ? -1 : 1;
        wide_ = abs(x) >= Rational(1, 2);
        first_ = wide_ ? actual(0) : actual(-2);
        stage_ = 1;
        chosen_.push_back(first_);
        return first_;
    }

    Point second;
    if (wide_) {
        // The tracked server that did not serve the hub decides the side.
        std::size_t idle = tracked_[1];
        if (alg[tracked_[1]] == first_ && alg[tracked_[0]] != first_) idle = tracked_[0];
        second = rel_of(alg[idle]) > 0 ? actual(-2) : actual(2);
    } else {
        const auto d0 = distance_to_config(*space_, actual(0), alg);
        const auto d2 = distance_to_config(*space_, actual(2), alg);
        second = d2 > d0 ? actual(2) : actual(0);
    }
    chosen_.push_back(second);
    stage_ = 0;
    ++pair_;
    return second;
}

Multiconfig StrictLineAdversary::finish_phase(const Configuration&) {
    Multiconfig target = chosen_;
    std::sort(target.begin(), target.end());
    return target;
}

// ---------------------------------------------------------------- registry

namespace {

void reject_unknown(const nlohmann::json& params, std::initializer_list<std::string_view> allowed) {
    if (params.is_null()) return;
    if (!params.is_object()) throw InvalidParameter("adversary parameters must be a JSON object");
    for (const auto& [key, value] : params.items())
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
            throw InvalidParameter("unknown parameter '" + key + "'");
}

template <class T>
T param(const nlohmann::json& params, const char* name, T fallback) {
    if (params.is_null() || !params.contains(name)) return fallback;
    try {
        return params.at(name).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InvalidParameter(std::string("parameter '") + name + "' has the wrong type");
    }
}

Rational rational_param(const nlohmann::json& params, const char* name, Rational fallback) {
    if (params.is_null() || !params.contains(name)) return fallback;
    const auto& v = params.at(name);
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw InvalidParameter(std::string("parameter '") + name + "' must be an integer or a \"p/q\" string");
}

}  // namespace

std::unique_ptr<Adversary> make_adversary(std::string_view key, const nlohmann::json& params, std::size_t phases,
                                          std::uint64_t seed) {
    if (key == "uniform") {
        reject_unknown(params, {"k", "n"});
        const int k = param(params, "k", 2);
        const int n = param(params, "n", k + 1);
        if (k < 1 || n < k + 1) throw InvalidParameter("uniform adversary needs n >= k+1");
        std::vector<std::size_t> subset;
        for (int v = 0; v <= k; ++v) subset.push_back(static_cast<std::size_t>(v));
        return std::make_unique<UniformAdversary>(build_clique(n), subset, phases);
    }
    if (key == "line") {
        reject_unknown(params, {"k", "space", "n"});
        const int k = param(params, "k", 2);
        const auto kind = param<std::string>(params, "space", "line");
        if (k < 2) throw InvalidParameter("line adversary needs k >= 2");
        if (kind == "line") {
            const auto margin = static_cast<std::int64_t>(2 * phases + 8);
            return std::make_unique<LineAdversary>(build_line_segment(Rational(-margin), Rational(2 * k + 2 + margin)), k,
                                                   phases);
        }
        if (kind == "cycle") {
            const int n = param(params, "n", 2 * k + 6);
            if (n < 2 * k + 6 || n % 2 != 0) throw InvalidParameter("line adversary needs an even cycle of >= 2k+6 vertices");
            return std::make_unique<LineAdversary>(build_cycle(n), k, phases);
        }
        throw InvalidParameter("space must be 'line' or 'cycle'");
    }
    if (key == "double-cycle") {
        reject_unknown(params, {"k"});
        if (param(params, "k", 2) != 2) throw InvalidParameter("double-cycle adversary is for k = 2");
        return std::make_unique<DoubleCycleAdversary>(build_double_cycle(), 2, phases);
    }
    if (key == "chain") {
        reject_unknown(params, {"k"});
        const int k = param(params, "k", 4);
        return std::make_unique<DoubleCycleAdversary>(build_double_cycle_chain(k), k, phases);
    }
    if (key == "strict-line") {
        reject_unknown(params, {"k"});
        return std::make_unique<StrictLineAdversary>(param(params, "k", 2));
    }
    if (key == "layered") {
        reject_unknown(params, {"k"});
        return std::make_unique<LayeredAdversary>(build_layered(param(params, "k", 2)), phases);
    }
    if (key == "rand-strict-line") {
        reject_unknown(params, {"k", "delta", "N"});
        return std::make_unique<StrictLineSampler>(param(params, "k", 2), rational_param(params, "delta", Rational(1, 10)),
                                                   param<std::int64_t>(params, "N", 20), seed);
    }
    if (key == "rand-layered") {
        reject_unknown(params, {"k", "N", "m", "materialize"});
        RandomLayeredParams p;
        p.k = param(params, "k", 2);
        p.n = param<std::int64_t>(params, "N", 40);
        p.m = param(params, "m", 4);
        p.materialize = param(params, "materialize", false);
        return std::make_unique<RandomLayeredSampler>(build_layered_random(p.k, p.n, p.materialize), p, phases, seed);
    }
    throw InvalidParameter("unknown adversary '" + std::string(key) + "'");
}

std::vector<std::string> adversary_keys() {
    return {"uniform", "line", "double-cycle", "chain", "strict-line", "layered", "rand-strict-line", "rand-layered"};
}

}  // namespace kserver
