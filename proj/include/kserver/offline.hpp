#pragma once

#include "kserver/core.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace kserver {

inline constexpr std::int64_t kDefaultStateCap = 5'000'000;

// All sorted k-multisets of the vertices of a finite space, in lexicographic
// order, with integer transition costs between them.
class MulticonfigSpace {
public:
    // Throws TooLarge if the number of multisets exceeds state_cap.
    MulticonfigSpace(FinitePtr space, std::size_t k, CostModel model, std::int64_t state_cap);

    std::size_t size() const noexcept { return states_.size() / k_; }
    std::size_t k() const noexcept { return k_; }
    const FiniteMetric& space() const noexcept { return *space_; }
    CostModel model() const noexcept { return model_; }

    // Vertex indices of state s, sorted.
    std::span<const std::uint32_t> state(std::size_t s) const {
        return {states_.data() + s * k_, k_};
    }
    Multiconfig multiconfig(std::size_t s) const;
    std::size_t rank(std::span<const std::uint32_t> sorted_vertices) const;
    std::size_t rank(const Configuration& c) const;
    // States containing vertex v, ascending.
    const std::vector<std::uint32_t>& covering(std::size_t v) const { return covering_[v]; }

    std::int64_t transition(std::size_t a, std::size_t b) const;

private:
    std::int64_t compute_transition(std::size_t a, std::size_t b) const;

    FinitePtr space_;
    std::size_t k_;
    CostModel model_;
    std::vector<std::uint32_t> states_;
    std::vector<std::vector<std::uint32_t>> covering_;
    std::vector<std::int32_t> table_;   // dense transition table when it fits the cap
};

struct OptResult {
    Rational cost{0};
    Schedule schedule;
    std::int64_t states_explored = 0;
};

// Exact offline optimum over unlabeled states. The per-step transition count
// (previous layer x next layer) and the state count must fit state_cap.
// Line instances with integer points are solved on their discretization and
// the schedule is mapped back; other line instances are unsupported.
OptResult opt_cost_dp(const Instance& inst, CostModel model, std::int64_t state_cap = kDefaultStateCap);

struct WorkFunctionTable {
    std::shared_ptr<const MulticonfigSpace> states;
    // values[t][s] = w_t(state s), t = 0..n.
    std::vector<std::vector<std::int64_t>> values;

    Rational value(std::size_t t, std::size_t s) const { return Rational(values[t][s]); }
    Rational minimum(std::size_t t) const;
};

// w_0(C) = transition(C_0, C); w_t(C) = min over D covering r_t of
// w_{t-1}(D) + transition(D, C). Needs (#states)^2 <= state_cap.
WorkFunctionTable work_function(const Instance& inst, CostModel model, std::int64_t state_cap = kDefaultStateCap);

// One relaxation step of the recurrence above.
std::vector<std::int64_t> work_function_step(const MulticonfigSpace& states, const std::vector<std::int64_t>& prev,
                                             std::size_t request_vertex);

// Cost of a schedule; InvalidSchedule(j) if configuration j misses request j.
Rational verify_schedule(const Instance& inst, const Schedule& sched, CostModel model);

// Integer line instance mapped onto the path over [min-radius, max+radius].
struct Discretized {
    Instance instance;
    std::int64_t offset = 0;  // vertex v is coordinate v + offset
};
Discretized discretize_line(const Instance& inst, std::int64_t radius = 2);

}  // namespace kserver
