#include "kserver/harness.hpp"

#include "kserver/errors.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

namespace kserver {

OptMode parse_opt_mode(std::string_view text) {
    if (text == "cert" || text == "certificate") return OptMode::Certificate;
    if (text == "dp") return OptMode::Dp;
    if (text == "both") return OptMode::Both;
    throw InvalidParameter("opt mode must be cert, dp or both");
}

std::string_view to_string(OptMode mode) {
    switch (mode) {
        case OptMode::Certificate: return "cert";
        case OptMode::Dp: return "dp";
        case OptMode::Both: return "both";
    }
    return "cert";
}

namespace {

constexpr std::size_t kMaxRequests = 50'000'000;

}  // namespace

RunReport play(OnlineAlgorithm& alg, Adversary& adv, OptMode mode, std::int64_t state_cap) {
    RunReport r;
    r.algorithm = alg.name();
    r.adversary = adv.name();
    r.k = static_cast<int>(adv.k());
    alg.init(adv.space(), adv.initial_configuration());

    Rational phase_cost(0);
    for (;;) {
        const auto ev = adv.next(alg.configuration());
        if (ev.kind == AdversaryEvent::Kind::Done) break;
        if (ev.kind == AdversaryEvent::Kind::PhaseEnd) {
            r.phase_costs.push_back(phase_cost);
            phase_cost = Rational(0);
            continue;
        }
        const Configuration before = alg.configuration();
        const auto& after = alg.serve(ev.point);
        if (!after.covers(ev.point)) throw InternalError(alg.name() + " left a request uncovered");
        const auto c = step_cost(*adv.space(), CostModel::Time, before, after);
        phase_cost += c;
        r.alg_cost += c;
        if (++r.requests > kMaxRequests) throw InternalError("match exceeded the request limit");
    }
    r.phases = adv.completed_phases();

    const auto inst = adv.instance();
    const auto cert = adv.certificate();
    r.cert_opt = schedule_cost(CostModel::Time, inst, cert);
    if (r.cert_opt > adv.promised_certificate_cost())
        throw InternalError("certificate costs " + to_string(r.cert_opt) + ", more than promised");
    if (mode != OptMode::Certificate) r.dp_opt = opt_cost_dp(inst, CostModel::Time, state_cap).cost;
    auto opt = r.cert_opt;
    if (r.dp_opt) opt = std::min(opt, *r.dp_opt);
    r.ratio = opt > 0 ? r.alg_cost / opt : Rational(0);
    r.flags = adv.flagged_phases();
    r.rerequests = adv.rerequests();
    r.diagnostics = adv.diagnostics();
    return r;
}

RunReport run_match(std::string_view algorithm, std::string_view adversary, const nlohmann::json& params,
                    std::size_t phases, std::uint64_t seed, OptMode mode, std::int64_t state_cap) {
    const auto start = std::chrono::steady_clock::now();
    auto alg = make_algorithm(algorithm);
    auto adv = make_adversary(adversary, params, phases, seed);
    auto r = play(*alg, *adv, mode, state_cap);
    r.algorithm = std::string(algorithm);
    r.adversary = std::string(adversary);
    r.params = params.is_null() ? nlohmann::json::object() : params;
    r.seed = seed;
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

nlohmann::json to_json(const RunReport& r, bool include_wall_time) {
    nlohmann::json j;
    j["algorithm"] = r.algorithm;
    j["adversary"] = r.adversary;
    j["params"] = r.params;
    j["k"] = r.k;
    j["phases"] = r.phases;
    j["requests"] = r.requests;
    auto costs = nlohmann::json::array();
    for (const auto& c : r.phase_costs) costs.push_back(to_string(c));
    j["phase_costs"] = costs;
    j["alg_cost"] = to_string(r.alg_cost);
    j["cert_opt"] = to_string(r.cert_opt);
    j["dp_opt"] = r.dp_opt ? nlohmann::json(to_string(*r.dp_opt)) : nlohmann::json(nullptr);
    j["ratio"] = to_string(r.ratio);
    j["ratio_decimal"] = to_decimal(r.ratio, 6);
    j["flags"] = r.flags;
    j["rerequests"] = r.rerequests;
    j["seed"] = r.seed;
    j["diagnostics"] = r.diagnostics;
    if (include_wall_time) j["wall_seconds"] = r.wall_seconds;
    return j;
}

// ---------------------------------------------------------------- Yao

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 over (master, index)
    std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

YaoSample run_sample(std::string_view distribution, const nlohmann::json& params, std::string_view algorithm,
                     std::size_t phases, std::uint64_t seed) {
    auto adv = make_adversary(distribution, params, phases, seed);
    auto alg = make_algorithm(algorithm);
    const auto r = play(*alg, *adv);
    YaoSample s;
    s.seed = seed;
    s.alg_cost = r.alg_cost;
    s.cert_opt = r.cert_opt;
    s.units = dynamic_cast<const StrictLineSampler*>(adv.get()) ? adv->k() / 2 : r.phases;
    s.value = s.units > 0 ? to_double(r.alg_cost) / static_cast<double>(s.units) : 0.0;
    s.diagnostics = r.diagnostics;
    return s;
}

void accumulate(nlohmann::json& total, const nlohmann::json& part) {
    for (const auto& [key, value] : part.items()) {
        if (value.is_number()) {
            total[key] = total.value(key, 0.0) + value.get<double>();
        } else if (value.is_array()) {
            auto& arr = total[key];
            if (!arr.is_array()) arr = nlohmann::json::array();
            for (std::size_t i = 0; i < value.size(); ++i) {
                if (i >= arr.size()) arr.push_back(0.0);
                arr[i] = arr[i].get<double>() + value[i].get<double>();
            }
        }
    }
}

}  // namespace

YaoReport yao_estimate(std::string_view distribution, const nlohmann::json& params, std::string_view algorithm,
                       std::size_t samples, std::uint64_t master_seed, std::size_t phases, unsigned threads) {
    if (samples == 0) throw InvalidParameter("samples must be positive");
    if (phases == 0) throw InvalidParameter("phases must be positive");
    // Validate keys and parameters once before spawning workers.
    run_sample(distribution, params, algorithm, 1, derive_seed(master_seed, 0));

    YaoReport rep;
    rep.distribution = std::string(distribution);
    rep.params = params.is_null() ? nlohmann::json::object() : params;
    rep.algorithm = std::string(algorithm);
    rep.samples = samples;
    rep.phases = phases;
    rep.seed = master_seed;
    rep.records.resize(samples);

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, samples));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            const auto i = next.fetch_add(1);
            if (i >= samples) return;
            try {
                rep.records[i] = run_sample(distribution, params, algorithm, phases, derive_seed(master_seed, i));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = samples;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    double sum = 0;
    double cert_sum = 0;
    for (const auto& s : rep.records) {
        sum += s.value;
        cert_sum += s.units > 0 ? to_double(s.cert_opt) / static_cast<double>(s.units) : 0.0;
        accumulate(rep.diagnostics, s.diagnostics);
    }
    const auto n = static_cast<double>(samples);
    rep.mean = sum / n;
    rep.mean_cert = cert_sum / n;
    double sq = 0;
    for (const auto& s : rep.records) sq += (s.value - rep.mean) * (s.value - rep.mean);
    rep.stddev = samples > 1 ? std::sqrt(sq / (n - 1)) : 0.0;
    rep.std_error = rep.stddev / std::sqrt(n);
    constexpr double z99 = 2.5758293035489;
    rep.ci_low = rep.mean - z99 * rep.std_error;
    rep.ci_high = rep.mean + z99 * rep.std_error;
    rep.ratio = rep.mean_cert > 0 ? rep.mean / rep.mean_cert : 0.0;
    return rep;
}

nlohmann::json to_json(const YaoReport& r, bool include_records) {
    nlohmann::json j;
    j["distribution"] = r.distribution;
    j["params"] = r.params;
    j["algorithm"] = r.algorithm;
    j["samples"] = r.samples;
    j["phases"] = r.phases;
    j["seed"] = r.seed;
    j["mean"] = r.mean;
    j["stddev"] = r.stddev;
    j["std_error"] = r.std_error;
    j["ci99"] = {r.ci_low, r.ci_high};
    j["mean_cert"] = r.mean_cert;
    j["ratio"] = r.ratio;
    j["diagnostics"] = r.diagnostics;
    if (include_records) {
        auto arr = nlohmann::json::array();
        for (const auto& s : r.records)
            arr.push_back({{"seed", s.seed},
                           {"alg_cost", to_string(s.alg_cost)},
                           {"cert_opt", to_string(s.cert_opt)},
                           {"units", s.units}});
        j["records"] = arr;
    }
    return j;
}

Rational harmonic(int k) {
    if (k < 1) throw InvalidParameter("harmonic number needs k >= 1");
    Rational h(0);
    for (int j = 1; j <= k; ++j) h += Rational(1, j);
    return h;
}

std::string csv_header() { return "run_id,algorithm,adversary,k,phases,alg_cost,cert_opt,dp_opt,ratio,flags,seed"; }

std::string csv_row(const std::string& run_id, const RunReport& r) {
    std::ostringstream out;
    out << run_id << ',' << r.algorithm << ',' << r.adversary << ',' << r.k << ',' << r.phases << ','
        << to_string(r.alg_cost) << ',' << to_string(r.cert_opt) << ',' << (r.dp_opt ? to_string(*r.dp_opt) : "")
        << ',' << to_string(r.ratio) << ',' << r.flags.size() << ',' << r.seed;
    return out.str();
}

}  // namespace kserver
