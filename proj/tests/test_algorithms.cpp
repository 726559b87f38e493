#include "kserver/algorithms.hpp"
#include "kserver/errors.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace kserver;

namespace {

Configuration cfg(std::initializer_list<std::int64_t> xs) {
    std::vector<Point> p;
    for (auto x : xs) p.emplace_back(x);
    return Configuration(std::move(p));
}

Configuration vcfg(std::initializer_list<std::size_t> xs) {
    std::vector<Point> p;
    for (auto x : xs) p.push_back(Point::vertex(x));
    return Configuration(std::move(p));
}

}  // namespace

TEST_CASE("robin examples") {
    Robin robin;
    robin.init(build_clique(3), vcfg({0, 1}));
    CHECK(robin.serve(Point::vertex(2)) == vcfg({2, 1}));
    CHECK(robin.move_counter() == 1);
    CHECK(robin.serve(Point::vertex(2)) == vcfg({2, 1}));
    CHECK(robin.move_counter() == 1);
    CHECK(robin.serve(Point::vertex(0)) == vcfg({2, 0}));
    CHECK(robin.move_counter() == 2);
    CHECK(robin.last_mover() == 1);
}

TEST_CASE("robin moves every server once between moves of the last server") {
    std::mt19937_64 rng(21);
    auto cycle = build_cycle(12);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t k = 2 + trial % 3;
        Robin robin;
        std::vector<Point> start;
        for (std::size_t i = 0; i < k; ++i) start.push_back(Point::vertex(2 * i));
        robin.init(cycle, Configuration(start));
        std::vector<std::size_t> movers;
        Rational time(0);
        Rational dist(0);
        for (int j = 0; j < 200; ++j) {
            const Configuration before = robin.configuration();
            const auto r = Point::vertex(rng() % 12);
            const auto& after = robin.serve(r);
            CHECK(after.covers(r));
            time += step_cost(*cycle, CostModel::Time, before, after);
            dist += step_cost(*cycle, CostModel::Distance, before, after);
            std::size_t moved = 0;
            for (std::size_t i = 0; i < k; ++i) {
                if (!(before[i] == after[i])) {
                    movers.push_back(i);
                    ++moved;
                }
            }
            CHECK(moved == (before.covers(r) ? 0u : 1u));
        }
        CHECK(time == dist);
        for (std::size_t m = 0; m < movers.size(); ++m) CHECK(movers[m] == m % k);
    }
}

TEST_CASE("greedy examples") {
    auto line = build_line_segment(Rational(0), Rational(10));
    Greedy g;
    g.init(line, cfg({2, 4}));
    CHECK(g.serve(Point(std::int64_t{3})) == cfg({3, 4}));
    g.init(line, cfg({2, 4}));
    CHECK(g.serve(Point(std::int64_t{5})) == cfg({2, 5}));
    CHECK(g.serve(Point(std::int64_t{5})) == cfg({2, 5}));
}

TEST_CASE("double coverage examples") {
    auto line = build_line_segment(Rational(-20), Rational(20));
    DoubleCoverageLine dc;
    dc.init(line, cfg({0, 10}));
    CHECK(dc.serve(Point(std::int64_t{4})) == cfg({4, 6}));
    dc.init(line, cfg({0, 10}));
    CHECK(dc.serve(Point(std::int64_t{12})) == cfg({0, 12}));
    dc.init(line, cfg({3, 3}));
    CHECK(dc.serve(Point(std::int64_t{3})) == cfg({3, 3}));

    dc.init(line, cfg({0, 1}));
    CHECK(dc.serve(Point(Rational(1, 3))) == Configuration({Point(Rational(1, 3)), Point(Rational(2, 3))}));

    DoubleCoverageLine wrong;
    CHECK_THROWS_AS(wrong.init(build_cycle(10), vcfg({0, 2})), Unsupported);
}

TEST_CASE("double coverage moves only the two neighbors, by equal amounts") {
    std::mt19937_64 rng(4);
    auto line = build_line_segment(Rational(-50), Rational(50));
    DoubleCoverageLine dc;
    dc.init(line, cfg({-6, -1, 3, 8}));
    for (int j = 0; j < 300; ++j) {
        const Configuration before = dc.configuration();
        const Point r(Rational(static_cast<std::int64_t>(rng() % 81) - 40, 1 + static_cast<std::int64_t>(rng() % 3)));
        const auto& after = dc.serve(r);
        CHECK(after.covers(r));
        std::vector<Rational> moves;
        for (std::size_t i = 0; i < 4; ++i) {
            const auto d = line->distance(before[i], after[i]);
            if (d > 0) moves.push_back(d);
        }
        CHECK(moves.size() <= 2);
        if (moves.size() == 2) CHECK(moves[0] == moves[1]);
    }
}

TEST_CASE("every algorithm covers every request") {
    std::mt19937_64 rng(77);
    auto path = build_path(0, 7);
    auto line = build_line_segment(Rational(0), Rational(7));
    for (const auto& key : algorithm_keys()) {
        auto alg = make_algorithm(key);
        const bool on_line = key == "dc-line";
        auto space = on_line ? SpacePtr(line) : SpacePtr(path);
        alg->init(space, cfg({0, 3, 7}));
        for (int j = 0; j < 200; ++j) {
            const Point r(static_cast<std::int64_t>(rng() % 8));
            CHECK(alg->serve(r).covers(r));
        }
    }
    CHECK_THROWS_AS(make_algorithm("lazy"), InvalidParameter);
}

TEST_CASE("algorithms are deterministic") {
    std::mt19937_64 rng(8);
    std::vector<Point> reqs;
    for (int j = 0; j < 100; ++j) reqs.push_back(Point::vertex(rng() % 12));
    for (const std::string key : {"robin", "greedy", "wfa-time"}) {
        auto a = make_algorithm(key);
        auto b = make_algorithm(key);
        a->init(build_double_cycle(), vcfg({0, 6}));
        b->init(build_double_cycle(), vcfg({0, 6}));
        for (const auto& r : reqs) CHECK(a->serve(r) == b->serve(r));
    }
}

TEST_CASE("wfa-time examples") {
    WorkFunctionTime wfa;
    wfa.init(build_clique(3), vcfg({0, 1}));
    CHECK(wfa.serve(Point::vertex(0)) == vcfg({0, 1}));
    WorkFunctionTime fresh;
    fresh.init(build_clique(3), vcfg({0, 1}));
    const Configuration before = fresh.configuration();
    const auto& after = fresh.serve(Point::vertex(2));
    CHECK(after.covers(Point::vertex(2)));
    CHECK(step_cost(fresh.space(), CostModel::Time, before, after) == Rational(1));

    WorkFunctionTime small(50);
    CHECK_THROWS_AS(small.init(build_path(0, 9), cfg({0, 9})), TooLarge);
}

TEST_CASE("wfa-time matches an exhaustive minimization on a path") {
    // Oracle: explicit pairs over the 4-vertex path with two-server bottleneck.
    std::vector<std::pair<int, int>> states;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) states.emplace_back(a, b);
    auto d = [](int x, int y) { return std::abs(x - y); };
    auto bottleneck = [&](std::pair<int, int> s, std::pair<int, int> t) {
        return std::min(std::max(d(s.first, t.first), d(s.second, t.second)),
                        std::max(d(s.first, t.second), d(s.second, t.first)));
    };
    auto covers = [](std::pair<int, int> s, int r) { return s.first == r || s.second == r; };

    std::mt19937_64 rng(31);
    auto path = build_path(0, 3);
    for (int trial = 0; trial < 50; ++trial) {
        WorkFunctionTime wfa;
        wfa.init(path, cfg({0, 3}));
        std::pair<int, int> current{0, 3};
        std::vector<int> w(states.size());
        for (std::size_t c = 0; c < states.size(); ++c) w[c] = bottleneck(current, states[c]);
        for (int j = 0; j < 8; ++j) {
            const int r = static_cast<int>(rng() % 4);
            std::vector<int> next(states.size());
            for (std::size_t c = 0; c < states.size(); ++c) {
                int best = 1 << 20;
                for (std::size_t p = 0; p < states.size(); ++p)
                    if (covers(states[p], r)) best = std::min(best, w[p] + bottleneck(states[p], states[c]));
                next[c] = best;
            }
            w = next;
            int best_value = 1 << 20;
            std::size_t cur = std::find(states.begin(), states.end(), current) - states.begin();
            std::size_t choice = cur;
            if (covers(current, r)) best_value = w[cur];
            for (std::size_t c = 0; c < states.size(); ++c) {
                if (!covers(states[c], r)) continue;
                const int v = w[c] + bottleneck(current, states[c]);
                if (v < best_value) {
                    best_value = v;
                    choice = c;
                }
            }
            current = states[choice];
            const auto mc = to_multiconfig(wfa.serve(Point(std::int64_t{r})));
            CHECK(mc[0].value() == Rational(current.first));
            CHECK(mc[1].value() == Rational(current.second));
        }
    }
}
