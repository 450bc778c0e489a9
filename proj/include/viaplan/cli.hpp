#pragma once

// Command-line front end. One subcommand per invocation:
//   plan-svpp      single-robot tour
//   plan-ksvpp     k-robot tours, optionally with the split baseline
//   plan-threat    minimum-threat point-to-point path
//   energy-compare multihop vs robot-assisted energy report
//   gen-instance   seeded random scenario
//   validate       placement diagnostics
// Exit codes: 0 success, 2 validation failure, 1 planner or input error.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "viaplan/energy.hpp"
#include "viaplan/instance_gen.hpp"
#include "viaplan/ksvpp.hpp"
#include "viaplan/scenario_io.hpp"
#include "viaplan/svg.hpp"
#include "viaplan/svpp.hpp"
#include "viaplan/threat.hpp"
#include "viaplan/threat_io.hpp"
#include "viaplan/viability.hpp"

namespace viaplan {

namespace cli_detail {

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

inline std::string numbered(const std::string& path, int index) {
    const size_t dot = path.find_last_of('.');
    const size_t sep = path.find_last_of('/');
    if (dot == std::string::npos || (sep != std::string::npos && dot < sep)) {
        return path + "." + std::to_string(index);
    }
    return path.substr(0, dot) + "." + std::to_string(index) + path.substr(dot);
}

}  // namespace cli_detail

inline int cli_run(const std::vector<std::string>& args, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"viable-path planning toolkit for bounded-curvature data-collection robots"};
    app.require_subcommand(1);

    std::string scenario_file, out_csv, out_svg, out_json;
    int k = 2;
    std::uint64_t seed = 0;
    double lambda = 0.035;
    bool baseline = false;
    bool threat_mode = false;

    auto* svpp_cmd = app.add_subcommand("plan-svpp", "plan a single-robot viable tour");
    svpp_cmd->add_option("--scenario", scenario_file, "scenario JSON")->required();
    svpp_cmd->add_option("--out", out_csv, "path CSV output");
    svpp_cmd->add_option("--svg", out_svg, "scene + path SVG output");

    auto* ksvpp_cmd = app.add_subcommand("plan-ksvpp", "plan k viable tours with balanced lengths");
    ksvpp_cmd->add_option("--scenario", scenario_file, "scenario JSON")->required();
    ksvpp_cmd->add_option("-k", k, "number of robots")->required();
    ksvpp_cmd->add_flag("--baseline", baseline, "also run the split baseline");
    ksvpp_cmd->add_option("--out", out_csv, "per-path CSV output (numbered)");
    ksvpp_cmd->add_option("--svg", out_svg, "scene + paths SVG output");

    auto* threat_cmd = app.add_subcommand("plan-threat", "plan a minimum-threat crossing");
    threat_cmd->add_option("--scenario", scenario_file, "threat scenario JSON")->required();
    threat_cmd->add_option("--out", out_csv, "path CSV output");
    threat_cmd->add_option("--svg", out_svg, "scene + path SVG output");

    auto* energy_cmd = app.add_subcommand("energy-compare",
                                          "compare multihop and robot-assisted energy");
    energy_cmd->add_option("--scenario", scenario_file, "scenario JSON")->required();
    energy_cmd->add_option("-k", k, "number of robots (default: single robot)");
    energy_cmd->add_option("--lambda", lambda, "robot locomotion cost, J per meter");

    int gen_n = 10, gen_obstacles = 0;
    double gen_field = 200.0, gen_g_lo = 0.0, gen_g_hi = 0.0;
    std::vector<double> gen_hotspot;
    bool gen_connected = false;
    auto* gen_cmd = app.add_subcommand("gen-instance", "generate a random scenario");
    gen_cmd->add_option("--n", gen_n, "number of nodes including the base");
    gen_cmd->add_option("--obstacles", gen_obstacles, "number of box obstacles");
    gen_cmd->add_option("--field", gen_field, "square field edge, meters");
    gen_cmd->add_option("--seed", seed, "random seed");
    gen_cmd->add_option("--g-lo", gen_g_lo, "uniform load lower bound, bits");
    gen_cmd->add_option("--g-hi", gen_g_hi, "uniform load upper bound, bits");
    gen_cmd->add_option("--hotspot", gen_hotspot,
                        "gaussian hotspot: x y peak_bits (overrides uniform loads)")
        ->expected(3);
    gen_cmd->add_flag("--connected", gen_connected, "require a connected multihop graph");
    gen_cmd->add_option("--out", out_json, "scenario JSON output")->required();

    auto* validate_cmd = app.add_subcommand("validate", "report placement violations");
    validate_cmd->add_option("--scenario", scenario_file, "scenario JSON")->required();
    validate_cmd->add_flag("--threat", threat_mode, "treat the input as a threat scenario");

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(std::vector<std::string>(argv));
    } catch (const CLI::ParseError& e) {
        std::stringstream ss;
        const int code = app.exit(e, ss, ss);
        (code == 0 ? out : err) << ss.str();
        return code == 0 ? 0 : 1;
    }

    try {
        if (svpp_cmd->parsed()) {
            const Scenario s = load_scenario(scenario_file);
            const auto violations = validate(s);
            if (!violations.empty()) {
                for (const auto& v : violations) err << "violation: " << v.detail << "\n";
                return 2;
            }
            const SvppResult result = plan_svpp(s);
            if (!out_csv.empty()) cli_detail::write_file(out_csv, path_to_csv(result.path));
            if (!out_svg.empty()) cli_detail::write_file(out_svg, render_svg(s, result.path));
            nlohmann::json j{{"length_m", result.length},
                             {"n_prime", result.n_prime},
                             {"K", result.blocking_count}};
            out << j.dump(2) << "\n";
            return 0;
        }
        if (ksvpp_cmd->parsed()) {
            const Scenario s = load_scenario(scenario_file);
            const auto violations = validate(s);
            if (!violations.empty()) {
                for (const auto& v : violations) err << "violation: " << v.detail << "\n";
                return 2;
            }
            const TangentGraph g = build_tangent_graph(s);
            const SvppResult whole = construct_robust(s, g, compute_permutation(g, s));
            const KPlan plan = plan_ksvpp(s, g, whole, k);
            nlohmann::json j{{"k", k},
                             {"k_length_m", plan.k_length},
                             {"lengths_m", plan.lengths}};
            if (baseline) {
                const KPlan base = plan_viable_ksplitour(s, g, whole, k);
                j["baseline"] = {{"k_length_m", base.k_length}, {"lengths_m", base.lengths}};
                j["improvement"] = base.k_length > 0.0
                                       ? (base.k_length - plan.k_length) / base.k_length
                                       : 0.0;
            }
            if (!out_csv.empty()) {
                for (size_t i = 0; i < plan.paths.size(); ++i) {
                    cli_detail::write_file(cli_detail::numbered(out_csv, static_cast<int>(i) + 1),
                                           path_to_csv(plan.paths[i]));
                }
            }
            if (!out_svg.empty()) {
                for (size_t i = 0; i < plan.paths.size(); ++i) {
                    cli_detail::write_file(cli_detail::numbered(out_svg, static_cast<int>(i) + 1),
                                           render_svg(s, plan.paths[i]));
                }
                std::vector<const ViablePath*> refs;
                for (const auto& p : plan.paths) refs.push_back(&p);
                cli_detail::write_file(out_svg, render_svg(s, refs));
            }
            out << j.dump(2) << "\n";
            return 0;
        }
        if (threat_cmd->parsed()) {
            const ThreatScenario ts = load_threat_scenario(scenario_file);
            const ThreatPlan plan = plan_min_threat(ts);
            if (!out_csv.empty()) cli_detail::write_file(out_csv, path_to_csv(plan.best.path));
            if (!out_svg.empty()) {
                cli_detail::write_file(out_svg,
                                       render_threat_svg(ts, &plan.best.path, plan.best.theta));
            }
            nlohmann::json j{{"theta", plan.best.theta}, {"length_m", plan.best.length}};
            out << j.dump(2) << "\n";
            return 0;
        }
        if (energy_cmd->parsed()) {
            const Scenario s = load_scenario(scenario_file);
            const auto violations = validate(s);
            if (!violations.empty()) {
                for (const auto& v : violations) err << "violation: " << v.detail << "\n";
                return 2;
            }
            double total_length = 0.0;
            if (energy_cmd->count("-k") > 0 && k > 1) {
                const KPlan plan = plan_ksvpp(s, k);
                for (double len : plan.lengths) total_length += len;
            } else {
                total_length = plan_svpp(s).length;
            }
            const EnergyReport report = energy_compare(s, total_length, lambda);
            nlohmann::json j{{"e_multihop_j", report.e_multihop},
                             {"e_node_j", report.e_node},
                             {"e_robot_j", report.e_robot},
                             {"e_singlehop_j", report.e_singlehop},
                             {"hops", report.hops},
                             {"lambda_j_per_m", lambda},
                             {"path_length_m", total_length}};
            out << j.dump(2) << "\n";
            return 0;
        }
        if (gen_cmd->parsed()) {
            GenSpec spec;
            spec.n_nodes = gen_n;
            spec.n_obstacles = gen_obstacles;
            spec.field_width = spec.field_height = gen_field;
            spec.seed = seed;
            spec.require_connectivity = gen_connected;
            if (gen_hotspot.size() == 3) {
                spec.load_model = GenSpec::LoadModel::GaussianHotspot;
                spec.hotspot_center = {gen_hotspot[0], gen_hotspot[1]};
                spec.hotspot_peak_bits = gen_hotspot[2];
            } else {
                spec.load_model = GenSpec::LoadModel::Uniform;
                spec.g_lo_bits = gen_g_lo;
                spec.g_hi_bits = gen_g_hi;
            }
            const Scenario s = generate(spec);
            save_scenario(s, out_json);
            nlohmann::json j{{"n", static_cast<int>(s.nodes.size())},
                             {"obstacles", static_cast<int>(s.obstacles.size())},
                             {"seed", seed},
                             {"file", out_json}};
            out << j.dump(2) << "\n";
            return 0;
        }
        if (validate_cmd->parsed()) {
            std::vector<Violation> violations;
            if (threat_mode) {
                violations = validate_threat(load_threat_scenario(scenario_file));
            } else {
                violations = validate(load_scenario(scenario_file));
            }
            if (violations.empty()) {
                out << "{\n  \"valid\": true\n}\n";
                return 0;
            }
            for (const auto& v : violations) err << "violation: " << v.detail << "\n";
            return 2;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace viaplan
