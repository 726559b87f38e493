#include "kserver/errors.hpp"
#include "kserver/offline.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace kserver;

namespace {

Configuration vcfg(std::initializer_list<std::size_t> xs) {
    std::vector<Point> p;
    for (auto x : xs) p.push_back(Point::vertex(x));
    return Configuration(std::move(p));
}

}  // namespace

TEST_CASE("dp examples") {
    auto clique = build_clique(3);
    Instance none{clique, vcfg({0, 1}), {}};
    CHECK(opt_cost_dp(none, CostModel::Time).cost == Rational(0));

    Instance one{build_path(0, 6), vcfg({1, 5}), {Point::vertex(3)}};
    CHECK(opt_cost_dp(one, CostModel::Time).cost == Rational(2));

    Instance three{clique, vcfg({0, 1}), {Point::vertex(2), Point::vertex(2), Point::vertex(0)}};
    const auto r = opt_cost_dp(three, CostModel::Time);
    CHECK(r.cost == Rational(1));
    CHECK(verify_schedule(three, r.schedule, CostModel::Time) == r.cost);
    CHECK(opt_cost_dp(three, CostModel::Distance).cost == Rational(1));
}

TEST_CASE("dp matches exhaustive schedule enumeration") {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 200; ++t) {
        const auto s = oracle::random_small_instance(rng, 5, 2, 4);
        for (const bool time : {true, false}) {
            const auto model = time ? CostModel::Time : CostModel::Distance;
            const auto r = opt_cost_dp(s.instance, model);
            CHECK(r.cost == Rational(oracle::opt(s.d, s.initial, s.requests, time)));
            CHECK(verify_schedule(s.instance, r.schedule, model) == r.cost);
        }
    }
}

TEST_CASE("dp with three servers matches exhaustive enumeration") {
    std::mt19937_64 rng(102);
    for (int t = 0; t < 30; ++t) {
        const auto s = oracle::random_small_instance(rng, 4, 3, 3);
        const auto r = opt_cost_dp(s.instance, CostModel::Time);
        CHECK(r.cost == Rational(oracle::opt(s.d, s.initial, s.requests, true)));
    }
}

TEST_CASE("time optimum is between a k-th of and the distance optimum") {
    std::mt19937_64 rng(103);
    for (int t = 0; t < 100; ++t) {
        const std::size_t k = 2 + t % 2;
        const auto s = oracle::random_small_instance(rng, 7, k, 6);
        const auto time = opt_cost_dp(s.instance, CostModel::Time).cost;
        const auto dist = opt_cost_dp(s.instance, CostModel::Distance).cost;
        CHECK(time <= dist);
        CHECK(dist <= Rational(static_cast<std::int64_t>(k)) * time);
    }
}

TEST_CASE("work function minimum equals the dp optimum") {
    std::mt19937_64 rng(104);
    for (int t = 0; t < 100; ++t) {
        const auto s = oracle::random_small_instance(rng, 6, 2, 5);
        const auto wf = work_function(s.instance, CostModel::Time);
        const auto n = s.requests.size();
        CHECK(wf.minimum(n) == opt_cost_dp(s.instance, CostModel::Time).cost);
        const auto start = wf.states->rank(s.instance.initial);
        CHECK(wf.value(0, start) == Rational(0));
        for (std::size_t c = 0; c < wf.states->size(); ++c) {
            std::vector<int> target;
            for (auto v : wf.states->state(c)) target.push_back(static_cast<int>(v));
            CHECK(wf.values[0][c] == oracle::bottleneck(s.d, s.initial, target));
            for (std::size_t j = 1; j <= n; ++j) CHECK(wf.values[j][c] >= wf.values[j - 1][c]);
        }
    }
}

TEST_CASE("multiconfig space ranks its states") {
    auto space = build_cycle(8);
    MulticonfigSpace states(space, 3, CostModel::Time, 1000);
    CHECK(states.size() == 120);  // C(8+3-1, 3)
    for (std::size_t s = 0; s < states.size(); ++s) CHECK(states.rank(states.state(s)) == s);
    for (std::size_t s = 1; s < states.size(); ++s) CHECK(states.multiconfig(s - 1) < states.multiconfig(s));
    CHECK_THROWS_AS(MulticonfigSpace(space, 3, CostModel::Time, 100), TooLarge);
}

TEST_CASE("state cap and unsupported spaces") {
    Instance big{build_path(0, 30), vcfg({0, 10, 20}), {Point::vertex(5), Point::vertex(25)}};
    CHECK_THROWS_AS(opt_cost_dp(big, CostModel::Time, 1000), TooLarge);

    auto line = build_line_segment(Rational(0), Rational(10));
    Instance frac{line, Configuration({Point(Rational(1, 2))}), {Point(std::int64_t{3})}};
    CHECK_THROWS_AS(opt_cost_dp(frac, CostModel::Time), Unsupported);
}

TEST_CASE("line instances are solved on their discretization") {
    auto line = build_line_segment(Rational(-100), Rational(100));
    Instance inst{line, Configuration({Point(std::int64_t{0}), Point(std::int64_t{2})}),
                  {Point(std::int64_t{3}), Point(std::int64_t{1}), Point(std::int64_t{-1})}};
    const auto disc = discretize_line(inst);
    CHECK(disc.offset == -3);
    CHECK(disc.instance.requests.front() == Point::vertex(6));
    const auto r = opt_cost_dp(inst, CostModel::Time);
    CHECK(r.cost == Rational(3));
    CHECK(verify_schedule(inst, r.schedule, CostModel::Time) == r.cost);

    // Same instance on an explicit path, independent of the discretization.
    auto path = build_path(-10, 10);
    Instance on_path{path, Configuration({Point::vertex(10), Point::vertex(12)}),
                     {Point::vertex(13), Point::vertex(11), Point::vertex(9)}};
    CHECK(opt_cost_dp(on_path, CostModel::Time).cost == r.cost);
}

TEST_CASE("verify schedule reports the first uncovered request") {
    auto clique = build_clique(3);
    Instance inst{clique, vcfg({0, 1}), {Point::vertex(2), Point::vertex(2), Point::vertex(0)}};
    CHECK(verify_schedule(inst, {vcfg({2, 1}), vcfg({2, 1}), vcfg({0, 1})}, CostModel::Time) == Rational(2));
    try {
        verify_schedule(inst, {vcfg({0, 1}), vcfg({2, 1}), vcfg({2, 0})}, CostModel::Time);
        FAIL("expected an invalid schedule");
    } catch (const InvalidSchedule& e) {
        CHECK(e.index() == 0);
    }
}
