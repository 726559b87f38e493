#include "kserver/adversaries.hpp"

#include "kserver/errors.hpp"

#include <algorithm>

namespace kserver {

// ---------------------------------------------------------------- strict line

namespace {

std::shared_ptr<const LineMetric> sampler_line(int k) {
    if (k < 2 || k % 2 != 0) throw InvalidParameter("rand-strict-line needs an even k >= 2");
    return build_line_segment(Rational(0), Rational((k / 2 + 1) * StrictLineAdversary::spacing(k)));
}

Configuration sampler_start(int k) {
    std::vector<Point> pos;
    const auto d = StrictLineAdversary::spacing(k);
    for (int i = 1; i <= k / 2; ++i) {
        pos.emplace_back(i * d - 1);
        pos.emplace_back(i * d + 1);
    }
    return Configuration(std::move(pos));
}

}  // namespace

StrictLineSampler::StrictLineSampler(int k, Rational delta, std::int64_t alternations, std::uint64_t seed)
    : Adversary(sampler_line(k), sampler_start(k), 1, false) {
    if (delta <= 0 || delta >= 1) throw InvalidParameter("delta must lie in (0, 1)");
    if (alternations < 1 || delta * Rational(alternations) < 2)
        throw InvalidParameter("rand-strict-line needs N * delta >= 2");
    std::mt19937_64 rng(seed);
    const auto d = StrictLineAdversary::spacing(k);
    for (int i = 1; i <= k / 2; ++i) {
        const Rational c(i * d);
        auto at = [&](Rational rel) { return Point(c + rel); };
        std::vector<Point> held;
        if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
            sequence_.push_back(at(0));
            const int branch = std::uniform_int_distribution<int>(0, 2)(rng);
            if (branch < 2) {
                const auto side = at(Rational(branch == 0 ? -2 : 2));
                sequence_.push_back(side);
                held = {at(0), side};
                branches_.push_back(0);
            } else {
                for (std::int64_t j = 0; j < alternations; ++j) sequence_.push_back(at(j % 2 == 0 ? delta : Rational(0)));
                held = {at(0), at(delta)};
                branches_.push_back(1);
            }
        } else {
            const int first = std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? -2 : 2;
            std::vector<int> rest;
            for (int r : {-2, 0, 2})
                if (r != first) rest.push_back(r);
            const int second = rest[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 1)(rng))];
            sequence_.push_back(at(Rational(first)));
            sequence_.push_back(at(Rational(second)));
            held = {at(Rational(first)), at(Rational(second))};
            branches_.push_back(2);
        }
        target_.insert(target_.end(), held.begin(), held.end());
    }
    std::sort(target_.begin(), target_.end());
}

std::optional<Point> StrictLineSampler::fresh_request(const Configuration&) {
    if (cursor_ == sequence_.size()) return std::nullopt;
    return sequence_[cursor_++];
}

Multiconfig StrictLineSampler::finish_phase(const Configuration&) { return target_; }

// ---------------------------------------------------------------- random layered

namespace {

FinitePtr sampler_space(const RandomLayeredBuild& build) {
    if (build.materialized) return build.materialized;
    return build.oracle;
}

Configuration random_start(const LayeredScheme& scheme) {
    const auto& choice = scheme.choice(0);
    std::vector<Point> pos{Point::vertex(scheme.hub(0, 0, 0))};
    for (int g = 1; g <= scheme.k(); ++g)
        if (g != choice.missing) pos.push_back(Point::vertex(scheme.fringe(0, 0, g, choice.points[g])));
    return Configuration(std::move(pos));
}

}  // namespace

RandomLayeredSampler::RandomLayeredSampler(const RandomLayeredBuild& build, RandomLayeredParams params,
                                           std::size_t phases, std::uint64_t seed)
    : Adversary(sampler_space(build), random_start(build.scheme), phases, false),
      scheme_(build.scheme),
      params_(params),
      rng_(seed),
      choice_(build.scheme.choice(0)) {
    if (params_.k < 2) throw InvalidParameter("rand-layered needs k >= 2");
    if (params_.m < 1) throw InvalidParameter("rand-layered needs m >= 1");
    if (params_.n < params_.k) throw InvalidParameter("rand-layered needs N >= k");
    draws_.assign(static_cast<std::size_t>(params_.k), 0);
    hits_.assign(static_cast<std::size_t>(params_.k), 0);
}

std::size_t RandomLayeredSampler::random_point(int group) {
    return static_cast<std::size_t>(
        std::uniform_int_distribution<std::int64_t>(0, scheme_.group_size(group) - 1)(rng_));
}

void RandomLayeredSampler::start_phase(const Configuration&) {
    layer_ = (layer_ + 1) % 3;
    block_ = scheme_.encode(choice_);
    group_point_.assign(static_cast<std::size_t>(params_.k) + 1, -1);
    subphase_ = 0;
    in_subphase_ = 0;
}

std::optional<Point> RandomLayeredSampler::fresh_request(const Configuration& alg) {
    const int k = params_.k;
    auto vertex_of = [&](int g) { return vertex_of_group(g); };
    auto end_subphase = [&]() {
        ++subphase_;
        in_subphase_ = 0;
    };

    if (subphase_ == 0) {
        group_point_[0] = static_cast<std::int64_t>(random_point(0));
        const auto p = vertex_of(0);
        if (alg.covers(p)) ++first_covered_;
        end_subphase();
        return p;
    }
    if (subphase_ == k) return std::nullopt;

    const auto s = static_cast<std::size_t>(subphase_);
    if (in_subphase_ == params_.m - 1) {
        std::vector<int> unused;
        for (int g = 1; g <= k; ++g)
            if (group_point_[static_cast<std::size_t>(g)] < 0) unused.push_back(g);
        const int g = unused[static_cast<std::size_t>(
            std::uniform_int_distribution<std::size_t>(0, unused.size() - 1)(rng_))];
        group_point_[static_cast<std::size_t>(g)] = static_cast<std::int64_t>(random_point(g));
        end_subphase();
        return vertex_of(g);
    }
    const int g = std::uniform_int_distribution<int>(0, k)(rng_);
    ++draws_[s];
    if (group_point_[static_cast<std::size_t>(g)] < 0) {
        ++hits_[s];
        group_point_[static_cast<std::size_t>(g)] = static_cast<std::int64_t>(random_point(g));
        end_subphase();
        return vertex_of(g);
    }
    ++in_subphase_;
    return vertex_of(g);
}

Multiconfig RandomLayeredSampler::finish_phase(const Configuration&) {
    LayeredScheme::Choice next;
    next.points.assign(static_cast<std::size_t>(params_.k) + 1, 0);
    Multiconfig target{vertex_of_group(0)};
    for (int g = 1; g <= params_.k; ++g) {
        const auto n = group_point_[static_cast<std::size_t>(g)];
        if (n < 0) {
            next.missing = g;
            continue;
        }
        next.points[static_cast<std::size_t>(g)] = n;
        target.push_back(vertex_of_group(g));
    }
    choice_ = next;
    std::sort(target.begin(), target.end());
    return target;
}

Point RandomLayeredSampler::vertex_of_group(int g) const {
    const auto n = group_point_[static_cast<std::size_t>(g)];
    return Point::vertex(g == 0 ? scheme_.hub(layer_, block_, n) : scheme_.fringe(layer_, block_, g, n));
}

nlohmann::json RandomLayeredSampler::diagnostics() const {
    return {{"subphase_draws", draws_}, {"subphase_hits", hits_}, {"first_request_covered", first_covered_}};
}

}  // namespace kserver
