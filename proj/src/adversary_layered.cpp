#include "kserver/adversaries.hpp"

#include "kserver/errors.hpp"

#include <algorithm>
#include <limits>

namespace kserver {

namespace {

Configuration block_start(const LayeredScheme& scheme, int layer, std::int64_t block, std::int64_t hub_point) {
    const auto& choice = scheme.choice(0);
    std::vector<Point> pos{Point::vertex(scheme.hub(layer, block, hub_point))};
    for (int g = 1; g <= scheme.k(); ++g)
        if (g != choice.missing) pos.push_back(Point::vertex(scheme.fringe(layer, block, g, choice.points[g])));
    return Configuration(std::move(pos));
}

}  // namespace

LayeredAdversary::LayeredAdversary(const LayeredBuild& build, std::size_t phases)
    : Adversary(build.space, block_start(build.scheme, 0, 0, 0), phases, true),
      graph_(build.space),
      scheme_(build.scheme),
      choice_(build.scheme.choice(0)) {}

std::uint32_t LayeredAdversary::min_hops(std::size_t v, const Configuration& alg) const {
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (const auto& p : alg) best = std::min(best, graph_->hops(v, p.index()));
    return best;
}

void LayeredAdversary::start_phase(const Configuration& alg) {
    next_layer_ = (layer_ + 1) % 3;
    block_ = scheme_.encode(choice_);
    phase_blocks_.push_back(block_);
    used_group_.assign(static_cast<std::size_t>(scheme_.k()) + 1, 0);
    phase_vertices_.assign(static_cast<std::size_t>(scheme_.k()) + 1, 0);
    const auto& opt = phase_targets().empty() ? to_multiconfig(initial_) : phase_targets().back();
    phase_clean_ = to_multiconfig(alg) == opt;
}

std::optional<Point> LayeredAdversary::fresh_request(const Configuration& alg) {
    if (!used_group_[0]) {
        used_group_[0] = 1;
        phase_vertices_[0] = scheme_.hub(next_layer_, block_);
        return Point::vertex(phase_vertices_[0]);
    }
    int used = 0;
    for (int g = 1; g <= scheme_.k(); ++g) used += used_group_[g];
    if (used == scheme_.k() - 1) return std::nullopt;

    std::optional<std::size_t> pick;
    int pick_group = 0;
    std::uint32_t best_d = 0;
    for (int g = 1; g <= scheme_.k() && !(pick && best_d >= 2); ++g) {
        if (used_group_[g]) continue;
        for (std::int64_t n = 0; n < scheme_.fringe_size(); ++n) {
            const auto v = scheme_.fringe(next_layer_, block_, g, n);
            const auto d = min_hops(v, alg);
            if (!pick || d > best_d) {
                pick = v;
                pick_group = g;
                best_d = d;
            }
            if (d >= 2) break;
        }
    }
    if (best_d < 2) {
        const bool covered = std::all_of(phase_points().begin(), phase_points().end(),
                                         [&](const Point& p) { return alg.covers(p); });
        if (phase_clean_ && !current_phase_flagged() && covered)
            throw InternalError("no fringe point at distance 2 in block " + std::to_string(block_));
        flag_current_phase();
    }
    fringe_distances_.push_back(best_d);
    used_group_[pick_group] = 1;
    phase_vertices_[pick_group] = *pick;
    return Point::vertex(*pick);
}

Multiconfig LayeredAdversary::finish_phase(const Configuration&) {
    LayeredScheme::Choice next;
    next.points.assign(static_cast<std::size_t>(scheme_.k()) + 1, 0);
    Multiconfig target{Point::vertex(phase_vertices_[0])};
    for (int g = 1; g <= scheme_.k(); ++g) {
        if (!used_group_[g]) {
            next.missing = g;
            continue;
        }
        next.points[g] = scheme_.vertex(phase_vertices_[g]).point;
        target.push_back(Point::vertex(phase_vertices_[g]));
    }
    layer_ = next_layer_;
    choice_ = next;
    std::sort(target.begin(), target.end());
    return target;
}

}  // namespace kserver
