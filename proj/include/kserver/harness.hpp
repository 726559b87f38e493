#pragma once

#include "kserver/adversaries.hpp"
#include "kserver/algorithms.hpp"
#include "kserver/offline.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kserver {

enum class OptMode { Certificate, Dp, Both };

OptMode parse_opt_mode(std::string_view text);
std::string_view to_string(OptMode mode);

struct RunReport {
    std::string algorithm;
    std::string adversary;
    nlohmann::json params = nlohmann::json::object();
    int k = 0;
    std::size_t phases = 0;
    std::size_t requests = 0;
    std::vector<Rational> phase_costs;  // time-model ALG cost per completed phase
    Rational alg_cost{0};
    Rational cert_opt{0};
    std::optional<Rational> dp_opt;
    Rational ratio{0};  // ALG over the smaller OPT value; 0 when that value is 0
    std::vector<std::size_t> flags;  // phases that hit the re-request cap or a fallback
    std::size_t rerequests = 0;
    std::uint64_t seed = 0;
    nlohmann::json diagnostics = nlohmann::json::object();
    double wall_seconds = 0;
};

// Time-model match; the certificate is always verified against the instance.
RunReport run_match(std::string_view algorithm, std::string_view adversary, const nlohmann::json& params,
                    std::size_t phases, std::uint64_t seed, OptMode mode = OptMode::Certificate,
                    std::int64_t state_cap = kDefaultStateCap);

// Same loop with caller-owned objects; the adversary must be fresh.
RunReport play(OnlineAlgorithm& alg, Adversary& adv, OptMode mode = OptMode::Certificate,
               std::int64_t state_cap = kDefaultStateCap);

// Wall time is left out unless asked for, so reports of equal runs are byte-identical.
nlohmann::json to_json(const RunReport& r, bool include_wall_time = false);

struct YaoSample {
    std::uint64_t seed = 0;
    Rational alg_cost{0};
    Rational cert_opt{0};
    std::size_t units = 0;  // phases, or pairs for single-shot distributions
    double value = 0;       // alg_cost / units
    nlohmann::json diagnostics;
};

struct YaoReport {
    std::string distribution;
    nlohmann::json params = nlohmann::json::object();
    std::string algorithm;
    std::size_t samples = 0;
    std::size_t phases = 0;
    std::uint64_t seed = 0;
    double mean = 0;  // per unit
    double stddev = 0;
    double std_error = 0;
    double ci_low = 0;  // 99%
    double ci_high = 0;
    double mean_cert = 0;  // per unit
    double ratio = 0;
    nlohmann::json diagnostics = nlohmann::json::object();  // numeric arrays summed over samples
    std::vector<YaoSample> records;
};

// Sample i runs with seed derive_seed(master, i); records are merged by index.
YaoReport yao_estimate(std::string_view distribution, const nlohmann::json& params, std::string_view algorithm,
                       std::size_t samples, std::uint64_t master_seed, std::size_t phases = 1,
                       unsigned threads = 0);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

nlohmann::json to_json(const YaoReport& r, bool include_records = false);

Rational harmonic(int k);

std::string csv_header();
std::string csv_row(const std::string& run_id, const RunReport& r);

}  // namespace kserver
