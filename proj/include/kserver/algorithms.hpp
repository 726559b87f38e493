#pragma once

#include "kserver/core.hpp"
#include "kserver/offline.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace kserver {

class OnlineAlgorithm {
public:
    virtual ~OnlineAlgorithm() = default;

    virtual std::string name() const = 0;
    virtual void init(SpacePtr space, Configuration initial);
    // Returns a configuration covering the request.
    virtual const Configuration& serve(const Point& request) = 0;

    const Configuration& configuration() const noexcept { return config_; }
    const MetricSpace& space() const { return *space_; }

protected:
    SpacePtr space_;
    Configuration config_;
};

// The m-th request that forces a move is served by s_{((m-1) mod k)+1} alone.
class Robin final : public OnlineAlgorithm {
public:
    std::string name() const override { return "robin"; }
    void init(SpacePtr space, Configuration initial) override;
    const Configuration& serve(const Point& request) override;

    std::size_t move_counter() const noexcept { return moves_; }
    // Label of the server that made the most recent forced move.
    std::size_t last_mover() const noexcept { return last_; }

private:
    std::size_t moves_ = 0;
    std::size_t last_ = 0;
};

// Nearest server moves; ties go to the lowest label.
class Greedy final : public OnlineAlgorithm {
public:
    std::string name() const override { return "greedy"; }
    const Configuration& serve(const Point& request) override;
};

// Double coverage on the line.
class DoubleCoverageLine final : public OnlineAlgorithm {
public:
    std::string name() const override { return "dc-line"; }
    void init(SpacePtr space, Configuration initial) override;
    const Configuration& serve(const Point& request) override;
};

// Experimental time-model work-function rule over unlabeled states.
class WorkFunctionTime final : public OnlineAlgorithm {
public:
    explicit WorkFunctionTime(std::int64_t state_cap = kDefaultStateCap) : state_cap_(state_cap) {}

    std::string name() const override { return "wfa-time"; }
    void init(SpacePtr space, Configuration initial) override;
    const Configuration& serve(const Point& request) override;

    const MulticonfigSpace& states() const { return *states_; }
    const std::vector<std::int64_t>& work() const noexcept { return work_; }

private:
    std::int64_t state_cap_;
    std::shared_ptr<const MulticonfigSpace> states_;
    std::vector<std::int64_t> work_;
    std::size_t current_ = 0;
};

std::unique_ptr<OnlineAlgorithm> make_algorithm(std::string_view key);
std::vector<std::string> algorithm_keys();

}  // namespace kserver
