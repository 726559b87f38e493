#include "kserver/adversaries.hpp"

#include "kserver/errors.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace kserver {

namespace {

Configuration gadget_start(int chain_k) {
    if (chain_k < 2 || chain_k % 2 != 0) throw InvalidParameter("double cycle needs an even k >= 2");
    std::vector<Point> pos;
    for (std::size_t g = 0; g < static_cast<std::size_t>(chain_k / 2); ++g) {
        pos.push_back(Point::vertex(double_cycle::vertex(g, 1, 1)));
        pos.push_back(Point::vertex(double_cycle::vertex(g, 3, 1)));
    }
    return Configuration(std::move(pos));
}

int mod6(int x) { return ((x % 6) + 6) % 6; }

}  // namespace

DoubleCycleAdversary::DoubleCycleAdversary(FinitePtr space, int chain_k, std::size_t phases)
    : Adversary(space, gadget_start(chain_k), phases, true), graph_(std::move(space)), chain_k_(chain_k) {
    const auto gadgets = static_cast<std::size_t>(chain_k / 2);
    const auto expected = chain_k == 2 ? 12 : gadgets * 12 + (gadgets - 1) * 4;
    if (graph_->size() != expected) throw InvalidParameter("space is not the double cycle for this k");
    base_.assign(gadgets, 1);
    done_.assign(gadgets, 0);
}

// Relative column r in 1..6 sits at actual column base + r - 2.
std::size_t DoubleCycleAdversary::vertex(std::size_t gadget, int rel_column, int twin) const {
    return double_cycle::vertex(gadget, mod6(base_[gadget] + rel_column - 2), twin);
}

std::vector<std::size_t> DoubleCycleAdversary::extended(std::size_t gadget) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 12; ++i) out.push_back(gadget * 12 + i);
    const auto gadgets = base_.size();
    if (gadget + 1 < gadgets) {
        out.push_back(double_cycle::path_vertex(chain_k_, gadget, 0));
        out.push_back(double_cycle::path_vertex(chain_k_, gadget, 1));
    }
    if (gadget > 0) {
        out.push_back(double_cycle::path_vertex(chain_k_, gadget - 1, 2));
        out.push_back(double_cycle::path_vertex(chain_k_, gadget - 1, 3));
    }
    return out;
}

std::uint32_t DoubleCycleAdversary::min_hops(std::size_t v, const Configuration& alg) const {
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (const auto& p : alg) best = std::min(best, graph_->hops(v, p.index()));
    return best;
}

void DoubleCycleAdversary::start_phase(const Configuration&) {
    std::fill(done_.begin(), done_.end(), 0);
    gadget_.reset();
    stage_ = 0;
    active_.clear();
    phase_vertices_.assign(2 * base_.size(), 0);
}

std::size_t DoubleCycleAdversary::choose_gadget(const Configuration& alg) {
    std::optional<std::size_t> chosen;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    std::optional<std::size_t> fallback;
    for (std::size_t g = 0; g < base_.size(); ++g) {
        if (done_[g]) continue;
        const auto ext = extended(g);
        std::size_t count = 0;
        for (const auto& p : alg)
            if (std::find(ext.begin(), ext.end(), p.index()) != ext.end()) ++count;
        if (count <= 2) {
            chosen = g;
            break;
        }
        if (count < fewest) {
            fewest = count;
            fallback = g;
        }
    }
    if (!chosen) {
        flag_current_phase();
        chosen = fallback;
    }
    const auto ext = extended(*chosen);
    std::uint32_t outside = std::numeric_limits<std::uint32_t>::max();
    bool any = false;
    for (const auto& p : alg) {
        if (std::find(ext.begin(), ext.end(), p.index()) != ext.end()) continue;
        any = true;
        for (std::size_t i = 0; i < 12; ++i) outside = std::min(outside, graph_->hops(p.index(), *chosen * 12 + i));
    }
    if (any) outside_distances_.push_back(outside);
    active_.push_back(*chosen);
    return *chosen;
}

std::size_t DoubleCycleAdversary::first_request(std::size_t g, const Configuration& alg) {
    const int order[3] = {1, 3, 5};
    // Case 1: an odd point at distance >= 2 from every server.
    for (int rel : order)
        for (int twin = 0; twin < 2; ++twin) {
            const auto v = vertex(g, rel, twin);
            if (min_hops(v, alg) >= 2) {
                first_rel_ = rel;
                case_two_ = false;
                return v;
            }
        }
    // Case 2: the near servers sit on two distinct even relative columns.
    std::set<int> columns;
    bool clean = true;
    for (const auto& p : alg) {
        bool near = false;
        for (int rel : order)
            for (int twin = 0; twin < 2; ++twin)
                if (graph_->hops(p.index(), vertex(g, rel, twin)) <= 1) near = true;
        if (!near) continue;
        if (p.index() >= base_.size() * 12 || double_cycle::gadget_of(p.index()) != g) {
            clean = false;
            continue;
        }
        const int rel = mod6(double_cycle::column_of(p.index()) - base_[g] + 2);
        const int one_based = rel == 0 ? 6 : rel;
        if (one_based % 2 != 0) clean = false;
        columns.insert(one_based);
    }
    int rel = 0;
    if (clean && columns.size() == 2) {
        const auto lo = *columns.begin();
        const auto hi = *columns.rbegin();
        rel = (lo == 2 && hi == 4) ? 3 : (lo == 4 && hi == 6) ? 5 : 1;
    }
    case_two_ = true;
    std::vector<int> rels = rel != 0 ? std::vector<int>{rel} : std::vector<int>{1, 3, 5};
    if (rel == 0) flag_current_phase();
    std::size_t best = vertex(g, rels[0], 0);
    std::uint32_t best_d = 0;
    bool have = false;
    for (int r : rels)
        for (int twin = 0; twin < 2; ++twin) {
            const auto v = vertex(g, r, twin);
            const auto d = min_hops(v, alg);
            if (!have || d > best_d) {
                best = v;
                best_d = d;
                first_rel_ = r;
                have = true;
            }
        }
    return best;
}

std::size_t DoubleCycleAdversary::second_request(std::size_t g, const Configuration& alg) {
    std::vector<int> rels;
    if (!case_two_)
        rels = first_rel_ == 3 ? std::vector<int>{1, 5} : std::vector<int>{3};
    else
        for (int r : {1, 3, 5})
            if (r != first_rel_) rels.push_back(r);
    std::size_t best = 0;
    std::uint32_t best_d = 0;
    bool have = false;
    for (int r : rels)
        for (int twin = 0; twin < 2; ++twin) {
            const auto v = vertex(g, r, twin);
            const auto d = min_hops(v, alg);
            if (!have || d > best_d) {
                best = v;
                best_d = d;
                have = true;
            }
        }
    if (best_d == 0) flag_current_phase();
    return best;
}

std::optional<Point> DoubleCycleAdversary::fresh_request(const Configuration& alg) {
    if (!gadget_ || stage_ == 2) {
        if (std::all_of(done_.begin(), done_.end(), [](char d) { return d != 0; })) return std::nullopt;
        gadget_ = choose_gadget(alg);
        stage_ = 0;
    }
    const auto g = *gadget_;
    if (stage_ == 0) {
        phase_vertices_[2 * g] = first_request(g, alg);
        stage_ = 1;
        return Point::vertex(phase_vertices_[2 * g]);
    }
    phase_vertices_[2 * g + 1] = second_request(g, alg);
    stage_ = 2;
    done_[g] = 1;
    return Point::vertex(phase_vertices_[2 * g + 1]);
}

Multiconfig DoubleCycleAdversary::finish_phase(const Configuration&) {
    Multiconfig target;
    for (std::size_t g = 0; g < base_.size(); ++g) {
        const int c1 = double_cycle::column_of(phase_vertices_[2 * g]);
        const int c2 = double_cycle::column_of(phase_vertices_[2 * g + 1]);
        base_[g] = mod6(c2 - c1) == 2 ? c1 : c2;
        target.push_back(Point::vertex(phase_vertices_[2 * g]));
        target.push_back(Point::vertex(phase_vertices_[2 * g + 1]));
    }
    std::sort(target.begin(), target.end());
    return target;
}

}  // namespace kserver
