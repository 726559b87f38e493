#include "kserver/errors.hpp"
#include "kserver/harness.hpp"
#include "kserver/layered.hpp"
#include "kserver/metric.hpp"
#include "kserver/offline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <random>

using namespace kserver;
using nlohmann::json;

namespace {

json parse_params(const std::string& text) {
    if (text.empty()) return json::object();
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidParameter(std::string("params are not valid JSON: ") + e.what());
    }
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw InvalidParameter(path + ": " + e.what());
    }
}

void emit(const json& doc, const std::string& out) {
    if (out.empty() || out == "-") {
        std::cout << doc.dump(2) << '\n';
        return;
    }
    std::ofstream file(out);
    if (!file) throw InvalidParameter("cannot write " + out);
    file << doc.dump(2) << '\n';
}

int int_param(const json& p, const char* name, int fallback) {
    if (!p.contains(name)) return fallback;
    if (!p.at(name).is_number_integer()) throw InvalidParameter(std::string("parameter '") + name + "' must be an integer");
    return p.at(name).get<int>();
}

SpacePtr generate(const std::string& kind, const json& p) {
    if (kind == "clique") return build_clique(int_param(p, "n", 3));
    if (kind == "cycle") return build_cycle_graph(int_param(p, "n", 10));
    if (kind == "path") return build_path(int_param(p, "lo", 0), int_param(p, "hi", 3));
    if (kind == "line") {
        auto bound = [&](const char* name, const char* fallback) {
            if (!p.contains(name)) return parse_rational(fallback);
            const auto& v = p.at(name);
            return v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<std::int64_t>());
        };
        return build_line_segment(bound("lo", "0"), bound("hi", "1"));
    }
    if (kind == "double-cycle") return build_double_cycle();
    if (kind == "chain") return build_double_cycle_chain(int_param(p, "k", 4));
    if (kind == "layered") return build_layered(int_param(p, "k", 2)).space;
    if (kind == "layered-random") {
        auto build = build_layered_random(int_param(p, "k", 2), int_param(p, "N", 2), true);
        if (!build.materialized) throw TooLarge("random layered graph exceeds the materialization limits");
        return build.materialized;
    }
    throw InvalidParameter("unknown space '" + kind + "'");
}

json check_space(const SpacePtr& space) {
    json report;
    report["kind"] = std::string(to_string(space->kind()));
    bool ok = true;
    auto finite = std::dynamic_pointer_cast<const FiniteMetric>(space);
    if (!finite) {
        report["ok"] = true;
        return report;
    }
    report["vertices"] = finite->size();
    const auto edges = finite->edges();
    report["edges"] = edges.size();
    if (auto graph = std::dynamic_pointer_cast<const GraphMetric>(space)) {
        const bool connected = is_connected(*graph);
        report["connected"] = connected;
        ok = ok && connected;
        if (connected) report["diameter"] = to_string(diameter(*graph));
        const auto& info = graph->info();
        if (info.generator == "layered" || info.generator == "layered-random") {
            const int k = info.params.at("k").get<int>();
            const auto scheme = info.generator == "layered"
                                    ? LayeredScheme::deterministic(k)
                                    : LayeredScheme::randomized(k, info.params.at("N").get<std::int64_t>());
            if (static_cast<std::int64_t>(graph->size()) == scheme.vertex_count()) {
                const auto blocks = check_block_properties(scheme, *graph);
                report["block_properties"] = {{"checks", blocks.checks},
                                              {"violations", {blocks.violations[0], blocks.violations[1],
                                                              blocks.violations[2]}}};
                ok = ok && blocks.ok();
            }
        }
    }
    std::vector<Point> points;
    for (std::size_t v = 0; v < finite->size(); ++v) points.push_back(Point::vertex(v));
    std::mt19937_64 rng(1);
    const auto axioms = check_metric_axioms(*space, points, 2000, rng);
    report["axiom_violations"] = axioms.violations;
    ok = ok && axioms.violations == 0;
    report["ok"] = ok;
    return report;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"k-server simulator under the time model"};
    app.require_subcommand(1);

    std::string out;

    auto* gen = app.add_subcommand("gen", "generate a metric space and export it as JSON");
    std::string gen_space;
    std::string gen_params;
    gen->add_option("space", gen_space, "clique, cycle, path, line, double-cycle, chain, layered, layered-random")
        ->required();
    gen->add_option("params", gen_params, "JSON parameter object");
    gen->add_option("-o,--output", out, "output file");

    auto* run = app.add_subcommand("run", "play an algorithm against an adversary");
    std::string alg;
    std::string adv;
    std::string params;
    std::size_t phases = 10;
    std::uint64_t seed = 0;
    std::string opt = "cert";
    bool csv = false;
    bool wall = false;
    std::int64_t cap = kDefaultStateCap;
    run->add_option("--alg", alg)->required();
    run->add_option("--adv", adv)->required();
    run->add_option("--params", params);
    run->add_option("--phases", phases);
    run->add_option("--seed", seed);
    run->add_option("--opt", opt, "cert, dp or both");
    run->add_option("--state-cap", cap);
    run->add_flag("--csv", csv, "print a CSV row instead of JSON");
    run->add_flag("--wall-time", wall, "include wall time in the report");
    run->add_option("-o,--output", out);

    auto* yao = app.add_subcommand("yao", "Monte Carlo estimate over a request distribution");
    std::string dist;
    std::size_t samples = 1000;
    unsigned threads = 0;
    bool records = false;
    yao->add_option("--dist", dist)->required();
    yao->add_option("--params", params);
    yao->add_option("--alg", alg)->required();
    yao->add_option("--samples", samples);
    yao->add_option("--seed", seed);
    yao->add_option("--phases", phases, "phases per sample")->default_val(1);
    yao->add_option("--threads", threads);
    yao->add_flag("--records", records, "include per-sample records");
    yao->add_option("-o,--output", out);

    auto* optc = app.add_subcommand("opt", "exact offline optimum of an instance");
    std::string instance_path;
    std::string model = "time";
    optc->add_option("--instance", instance_path)->required();
    optc->add_option("--model", model, "time or distance");
    optc->add_option("--state-cap", cap);
    optc->add_option("-o,--output", out);

    auto* check = app.add_subcommand("check", "structural validators for an exported space");
    std::string space_path;
    check->add_option("--space", space_path)->required();
    check->add_option("-o,--output", out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            emit(export_space(*generate(gen_space, parse_params(gen_params))), out);
        } else if (*run) {
            const auto report = run_match(alg, adv, parse_params(params), phases, seed, parse_opt_mode(opt), cap);
            if (csv) {
                std::cout << csv_header() << '\n' << csv_row("0", report) << '\n';
            } else {
                emit(to_json(report, wall), out);
            }
        } else if (*yao) {
            emit(to_json(yao_estimate(dist, parse_params(params), alg, samples, seed, phases, threads), records), out);
        } else if (*optc) {
            const auto inst = instance_from_json(read_json(instance_path));
            const auto result = opt_cost_dp(inst, parse_cost_model(model), cap);
            emit({{"cost", to_string(result.cost)}, {"states", result.states_explored}}, out);
        } else if (*check) {
            const auto report = check_space(import_space(read_json(space_path)));
            emit(report, out);
            return report.at("ok").get<bool>() ? 0 : 1;
        }
    } catch (const TooLarge& e) {
        std::cerr << "cap exceeded: " << e.what() << '\n';
        return 3;
    } catch (const InvalidParameter& e) {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const Unsupported& e) {
        std::cerr << "unsupported: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
