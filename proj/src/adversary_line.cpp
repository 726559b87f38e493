#include "kserver/adversaries.hpp"

#include "kserver/errors.hpp"

#include <algorithm>

namespace kserver {

namespace {

Configuration even_start(int k) {
    std::vector<Point> pos;
    for (int i = 0; i < k; ++i) pos.emplace_back(static_cast<std::int64_t>(2 * i + 2));
    return Configuration(std::move(pos));
}

std::optional<std::int64_t> cycle_size(const SpacePtr& space) {
    if (space->kind() == SpaceKind::RationalLine) return std::nullopt;
    if (space->kind() != SpaceKind::Cycle) throw Unsupported("line adversary runs on the line or a cycle");
    const auto& cycle = dynamic_cast<const FiniteMetric&>(*space);
    return static_cast<std::int64_t>(cycle.size());
}

}  // namespace

LineAdversary::LineAdversary(SpacePtr space, int k, std::size_t phases)
    : Adversary(space, even_start(k), phases, true), k_(k), cycle_(cycle_size(space)) {
    if (k < 2) throw InvalidParameter("line adversary needs k >= 2");
    if (cycle_ && (*cycle_ < 2 * k + 6 || *cycle_ % 2 != 0))
        throw InvalidParameter("line adversary needs an even cycle of >= 2k+6 vertices");
    for (int i = 0; i < k; ++i) opt_.push_back(2 * i + 2);
}

std::int64_t LineAdversary::wrap(std::int64_t x) const {
    if (!cycle_) return x;
    return ((x % *cycle_) + *cycle_) % *cycle_;
}

Point LineAdversary::point(std::int64_t x) const { return Point(wrap(x)); }

std::int64_t LineAdversary::shifted(std::int64_t x) const { return wrap(x - (anchor_ - 2)); }

std::size_t LineAdversary::requested_in(const Range& r) const {
    std::size_t n = 0;
    for (auto x : r.odd)
        if (std::find(requested_.begin(), requested_.end(), wrap(x)) != requested_.end()) ++n;
    return n;
}

void LineAdversary::start_phase(const Configuration&) {
    auto pos = opt_;
    for (auto& x : pos) x = wrap(x);
    std::sort(pos.begin(), pos.end());

    // Maximal runs of offline positions spaced exactly 2 apart.
    std::vector<std::vector<std::int64_t>> runs;
    for (auto x : pos) {
        if (runs.empty() || x - runs.back().back() != 2)
            runs.push_back({x});
        else
            runs.back().push_back(x);
    }
    if (cycle_ && runs.size() > 1 && pos.front() + *cycle_ - pos.back() == 2) {
        auto& last = runs.back();
        last.insert(last.end(), runs.front().begin(), runs.front().end());
        runs.erase(runs.begin());
    }
    std::size_t first = 0;
    for (std::size_t i = 0; i < runs.size(); ++i)
        if (runs[i].size() >= 2) {
            first = i;
            break;
        }
    if (runs[first].size() < 2) ++invariant_failures_;
    anchor_ = runs[first].front();

    ranges_.clear();
    auto make_range = [&](const std::vector<std::int64_t>& run) {
        Range r;
        r.quota = run.size();
        for (std::size_t i = 0; i <= run.size(); ++i) r.odd.push_back(run.front() - 1 + 2 * static_cast<std::int64_t>(i));
        return r;
    };
    ranges_.push_back(make_range(runs[first]));
    std::vector<Range> rest;
    for (std::size_t i = 0; i < runs.size(); ++i)
        if (i != first) rest.push_back(make_range(runs[i]));
    std::sort(rest.begin(), rest.end(),
              [&](const Range& a, const Range& b) { return shifted(a.odd.front()) < shifted(b.odd.front()); });
    ranges_.insert(ranges_.end(), rest.begin(), rest.end());
    for (auto& r : ranges_)
        std::sort(r.odd.begin(), r.odd.end(), [&](std::int64_t a, std::int64_t b) { return shifted(a) < shifted(b); });

    step_ = 0;
    requested_.clear();
}

// Unrequested odd point at distance >= 1 from every server in a range below
// its quota; lowest shifted coordinate. During selection the first range
// keeps one slot free and the point left of the anchor is excluded.
std::optional<std::int64_t> LineAdversary::pick_distant(const Configuration& alg, bool first_range_full_quota) {
    std::optional<std::int64_t> best;
    for (std::size_t m = 0; m < ranges_.size(); ++m) {
        const auto& r = ranges_[m];
        const auto quota = (m == 0 && !first_range_full_quota) ? r.quota - 1 : r.quota;
        if (requested_in(r) >= quota) continue;
        for (auto x : r.odd) {
            const auto w = wrap(x);
            if (std::find(requested_.begin(), requested_.end(), w) != requested_.end()) continue;
            if (!first_range_full_quota && w == wrap(anchor_ - 1)) continue;
            if (distance_to_config(*space_, point(w), alg) < 1) continue;
            if (!best || shifted(w) < shifted(*best)) best = w;
        }
    }
    return best;
}

std::optional<Point> LineAdversary::fresh_request(const Configuration& alg) {
    const auto total = static_cast<std::size_t>(k_);
    auto issue = [&](std::int64_t x) {
        requested_.push_back(wrap(x));
        return point(x);
    };

    if (step_ == 0) {
        step_ = 1;
        return issue(anchor_ + 1);
    }
    if (step_ == 1) {
        if (requested_.size() + 1 < total) {
            if (auto x = pick_distant(alg, false)) return issue(*x);
        }
        step_ = 2;
    }
    if (step_ == 2) {
        step_ = 3;
        std::optional<std::int64_t> best;
        Rational best_d(-1);
        for (auto x : ranges_[0].odd) {
            const auto w = wrap(x);
            if (std::find(requested_.begin(), requested_.end(), w) != requested_.end()) continue;
            const auto d = distance_to_config(*space_, point(w), alg);
            if (d >= 2) {
                best = w;
                best_d = d;
                break;
            }
            if (d > best_d) {
                best = w;
                best_d = d;
            }
        }
        if (best && requested_.size() < total) {
            if (best_d < 2) flag_current_phase();
            forced_distances_.push_back(best_d);
            return issue(*best);
        }
    }
    if (requested_.size() >= total) return std::nullopt;
    if (auto x = pick_distant(alg, true)) return issue(*x);

    flag_current_phase();
    std::optional<std::int64_t> best;
    Rational best_d(-1);
    for (const auto& r : ranges_) {
        if (requested_in(r) >= r.quota) continue;
        for (auto x : r.odd) {
            const auto w = wrap(x);
            if (std::find(requested_.begin(), requested_.end(), w) != requested_.end()) continue;
            const auto d = distance_to_config(*space_, point(w), alg);
            if (d > best_d || (d == best_d && shifted(w) < shifted(*best))) {
                best = w;
                best_d = d;
            }
        }
    }
    if (!best) throw InternalError("line adversary ran out of odd points");
    return issue(*best);
}

Multiconfig LineAdversary::finish_phase(const Configuration&) {
    auto next = requested_;
    std::sort(next.begin(), next.end());
    bool ok = next.size() == static_cast<std::size_t>(k_) && std::adjacent_find(next.begin(), next.end()) == next.end();
    bool pair = false;
    for (std::size_t i = 0; i < next.size(); ++i) {
        if (wrap(next[i] - next[0]) % 2 != 0) ok = false;
        if (i + 1 < next.size() && next[i + 1] - next[i] == 2) pair = true;
    }
    if (cycle_ && next.size() > 1 && next.front() + *cycle_ - next.back() == 2) pair = true;
    if (!ok || !pair) {
        ++invariant_failures_;
        if (!current_phase_flagged()) throw InternalError("line adversary produced an invalid offline configuration");
    }
    opt_ = next;
    Multiconfig target;
    for (auto x : next) target.push_back(point(x));
    return target;
}

}  // namespace kserver
