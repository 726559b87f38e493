#pragma once

#include "kserver/core.hpp"
#include "kserver/layered.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace kserver {

struct AdversaryEvent {
    enum class Kind { Request, PhaseEnd, Done };
    Kind kind = Kind::Done;
    Point point;
};

// Request generator driven by the algorithm's live configuration. Requests
// are grouped into phases; after the last phase next() returns Done.
// The certificate assigns every request the offline configuration of its
// phase, labeled along optimal transitions.
class Adversary {
public:
    virtual ~Adversary() = default;

    virtual std::string name() const = 0;
    AdversaryEvent next(const Configuration& alg);

    SpacePtr space() const { return space_; }
    const Configuration& initial_configuration() const noexcept { return initial_; }
    std::size_t k() const noexcept { return initial_.size(); }

    const std::vector<Point>& requests() const noexcept { return requests_; }
    std::size_t completed_phases() const noexcept { return targets_.size(); }
    const std::vector<std::size_t>& flagged_phases() const noexcept { return flagged_; }
    std::size_t rerequests() const noexcept { return rerequests_total_; }
    // Offline configuration held during each completed phase.
    const std::vector<Multiconfig>& phase_targets() const noexcept { return targets_; }

    Instance instance() const;
    Schedule certificate() const;
    // Certificate cost the construction promises: one per phase, or one in
    // total for single-shot constructions.
    virtual Rational promised_certificate_cost() const;

    virtual nlohmann::json diagnostics() const { return nlohmann::json::object(); }

protected:
    Adversary(SpacePtr space, Configuration initial, std::size_t phase_limit, bool enforce);

    // Called at the first next() of every phase.
    virtual void start_phase(const Configuration& alg) = 0;
    // Next new request of the phase, or nullopt when the phase is complete.
    virtual std::optional<Point> fresh_request(const Configuration& alg) = 0;
    // Offline configuration for the phase just completed; also advances state.
    virtual Multiconfig finish_phase(const Configuration& alg) = 0;

    void flag_current_phase();
    bool current_phase_flagged() const;
    std::size_t current_phase() const noexcept { return targets_.size(); }
    const std::vector<Point>& phase_points() const noexcept { return phase_points_; }
    bool requested_in_phase(const Point& p) const;
    bool enforcement_gave_up() const noexcept { return gave_up_; }

    SpacePtr space_;
    Configuration initial_;

private:
    std::optional<Point> enforce(const Configuration& alg);

    std::size_t phase_limit_;
    bool enforce_;
    bool in_phase_ = false;
    bool gave_up_ = false;
    std::size_t phase_rerequests_ = 0;
    std::size_t rerequests_total_ = 0;
    std::vector<Point> requests_;
    std::vector<std::size_t> request_phase_;
    std::vector<Point> phase_points_;
    std::vector<Multiconfig> targets_;
    std::vector<std::size_t> flagged_;
};

// Smallest label-free distance from p to any server.
Rational distance_to_config(const MetricSpace& space, const Point& p, const Configuration& c);

// Re-request rounds allowed per phase before the phase is flagged.
inline std::size_t rerequest_cap(std::size_t k) { return 4 * k; }

// ---------------------------------------------------------------- constructions

// Repeatedly requests the lowest uncovered vertex of a connected set S of k+1
// vertices; phases of k requests.
class UniformAdversary final : public Adversary {
public:
    UniformAdversary(FinitePtr space, std::vector<std::size_t> subset, std::size_t phases);
    std::string name() const override { return "uniform"; }

protected:
    void start_phase(const Configuration& alg) override;
    std::optional<Point> fresh_request(const Configuration& alg) override;
    Multiconfig finish_phase(const Configuration& alg) override;

private:
    FinitePtr graph_;
    std::vector<std::size_t> subset_;
    std::size_t hole_;  // vertex of S not held by the offline configuration
    std::size_t issued_ = 0;
};

// Odd/even integer construction on the line or an even cycle.
class LineAdversary final : public Adversary {
public:
    LineAdversary(SpacePtr space, int k, std::size_t phases);
    std::string name() const override { return "line"; }

    std::size_t invariant_failures() const noexcept { return invariant_failures_; }
    // Smallest ALG distance seen by the forced request of each phase.
    const std::vector<Rational>& forced_distances() const noexcept { return forced_distances_; }

protected:
    void start_phase(const Configuration& alg) override;
    std::optional<Point> fresh_request(const Configuration& alg) override;
    Multiconfig finish_phase(const Configuration& alg) override;

private:
    struct Range {
        std::vector<std::int64_t> odd;  // odd integers of the range, ascending by shifted coordinate
        std::size_t quota = 0;
    };

    std::int64_t wrap(std::int64_t x) const;
    Point point(std::int64_t x) const;
    std::int64_t shifted(std::int64_t x) const;
    std::size_t requested_in(const Range& r) const;
    std::optional<std::int64_t> pick_distant(const Configuration& alg, bool first_range_full_quota);

    int k_;
    std::optional<std::int64_t> cycle_;  // vertex count on a cycle
    std::vector<std::int64_t> opt_;      // offline positions at phase start
    std::vector<Range> ranges_;
    std::int64_t anchor_ = 0;            // first point of S_1
    int step_ = 0;                       // 0 first, 1 selection, 2 forced, 3 fill
    std::vector<std::int64_t> requested_;
    std::size_t invariant_failures_ = 0;
    std::vector<Rational> forced_distances_;
};

// Two-request phases on the double cycle (k = 2) or, per gadget, on the
// double cycle chain.
class DoubleCycleAdversary final : public Adversary {
public:
    // chain_k = 2 uses the single double cycle.
    DoubleCycleAdversary(FinitePtr space, int chain_k, std::size_t phases);
    std::string name() const override { return chain_k_ == 2 ? "double-cycle" : "chain"; }

    // Minimum ALG distance to the chosen gadget from servers outside its
    // extended neighborhood, one entry per gadget choice.
    const std::vector<std::uint32_t>& outside_distances() const noexcept { return outside_distances_; }

protected:
    void start_phase(const Configuration& alg) override;
    std::optional<Point> fresh_request(const Configuration& alg) override;
    Multiconfig finish_phase(const Configuration& alg) override;

private:
    std::size_t vertex(std::size_t gadget, int rel_column, int twin) const;
    std::vector<std::size_t> extended(std::size_t gadget) const;
    std::size_t choose_gadget(const Configuration& alg);
    std::size_t first_request(std::size_t gadget, const Configuration& alg);
    std::size_t second_request(std::size_t gadget, const Configuration& alg);
    std::uint32_t min_hops(std::size_t v, const Configuration& alg) const;

    FinitePtr graph_;
    int chain_k_;
    std::vector<int> base_;  // per gadget: column of the offline server at relative column 2
    std::vector<std::size_t> active_;
    std::vector<char> done_;
    std::optional<std::size_t> gadget_;
    int first_rel_ = 0;
    bool case_two_ = false;
    int stage_ = 0;  // requests issued for the current gadget
    std::vector<std::size_t> phase_vertices_;
    std::vector<std::uint32_t> outside_distances_;
};

// Single-shot pair construction for the strict ratio on the line.
class StrictLineAdversary final : public Adversary {
public:
    StrictLineAdversary(int k);
    std::string name() const override { return "strict-line"; }
    Rational promised_certificate_cost() const override { return Rational(1); }
    static std::int64_t spacing(int k) { return 2 * k + 4; }

protected:
    void start_phase(const Configuration& alg) override;
    std::optional<Point> fresh_request(const Configuration& alg) override;
    Multiconfig finish_phase(const Configuration& alg) override;

private:
    int k_;
    std::size_t pair_ = 0;
    int stage_ = 0;
    std::size_t tracked_[2] = {0, 0};
    int sign_ = 1;
    bool wide_ = false;  // |x| >= 1/2
    Point first_;
    std::vector<Point> chosen_;
};

// Hub then k-1 far fringe points of the block named by the offline choice.
class LayeredAdversary final : public Adversary {
public:
    explicit LayeredAdversary(const LayeredBuild& build, std::size_t phases);
    std::string name() const override { return "layered"; }

    // ALG distance of every fringe request when it was issued.
    const std::vector<std::uint32_t>& fringe_distances() const noexcept { return fringe_distances_; }
    const std::vector<std::int64_t>& phase_blocks() const noexcept { return phase_blocks_; }

protected:
    void start_phase(const Configuration& alg) override;
    std::optional<Point> fresh_request(const Configuration& alg) override;
    Multiconfig finish_phase(const Configuration& alg) override;

private:
    std::uint32_t min_hops(std::size_t v, const Configuration& alg) const;

    FinitePtr graph_;
    LayeredScheme scheme_;
    int layer_ = 0;
    LayeredScheme::Choice choice_;
    int next_layer_ = 1;
    std::int64_t block_ = 0;
    std::vector<char> used_group_;
    std::vector<std::size_t> phase_vertices_;
    bool phase_clean_ = true;
    std::vector<std::uint32_t> fringe_distances_;
    std::vector<std::int64_t> phase_blocks_;
};

// ---------------------------------------------------------------- samplers

// Single-shot random pair instance on the line (oblivious).
class StrictLineSampler final : public Adversary {
public:
    StrictLineSampler(int k, Rational delta, std::int64_t alternations, std::uint64_t seed);
    std::string name() const override { return "rand-strict-line"; }
    Rational promised_certificate_cost() const override { return Rational(1); }

    // Branch taken per pair: 0 hub then +-2, 1 hub then alternation, 2 fringe first.
    const std::vector<int>& branches() const noexcept { return branches_; }

protected:
    void start_phase(const Configuration&) override {}
    std::optional<Point> fresh_request(const Configuration& alg) override;
    Multiconfig finish_phase(const Configuration& alg) override;

private:
    std::vector<Point> sequence_;
    std::size_t cursor_ = 0;
    Multiconfig target_;
    std::vector<int> branches_;
};

struct RandomLayeredParams {
    int k = 2;
    std::int64_t n = 40;
    int m = 4;
    bool materialize = false;
};

// Oblivious phases with subphases on the random layered space.
class RandomLayeredSampler final : public Adversary {
public:
    RandomLayeredSampler(const RandomLayeredBuild& build, RandomLayeredParams params, std::size_t phases,
                         std::uint64_t seed);
    std::string name() const override { return "rand-layered"; }

    // For s = 1..k-1: draws from the k+1 groups made in subphase s and how
    // many of them hit an unused group (ending the subphase).
    const std::vector<std::int64_t>& subphase_draws() const noexcept { return draws_; }
    const std::vector<std::int64_t>& subphase_hits() const noexcept { return hits_; }
    std::int64_t first_request_covered() const noexcept { return first_covered_; }
    nlohmann::json diagnostics() const override;

protected:
    void start_phase(const Configuration& alg) override;
    std::optional<Point> fresh_request(const Configuration& alg) override;
    Multiconfig finish_phase(const Configuration& alg) override;

private:
    std::size_t random_point(int group);
    Point vertex_of_group(int group) const;

    LayeredScheme scheme_;
    RandomLayeredParams params_;
    std::mt19937_64 rng_;
    int layer_ = 0;
    LayeredScheme::Choice choice_;
    std::int64_t block_ = 0;
    std::vector<std::int64_t> group_point_;  // requested point per group this phase, -1 if unused
    int subphase_ = 0;
    int in_subphase_ = 0;
    std::vector<std::size_t> phase_vertices_;
    std::vector<std::int64_t> draws_;
    std::vector<std::int64_t> hits_;
    std::int64_t first_covered_ = 0;
};

// ---------------------------------------------------------------- registry

// Keys: uniform, line, double-cycle, chain, strict-line, layered,
// rand-strict-line, rand-layered. Unknown parameter names are rejected.
std::unique_ptr<Adversary> make_adversary(std::string_view key, const nlohmann::json& params, std::size_t phases,
                                          std::uint64_t seed = 0);
std::vector<std::string> adversary_keys();

}  // namespace kserver
