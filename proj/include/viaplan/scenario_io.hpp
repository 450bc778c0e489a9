#pragma once

// Scenario file format. Lengths in meters, time in seconds, data in bits.
//
// {
//   "robot":     {"v": 3.0, "u_M": 1.0},
//   "nodes":     [{"id": 1, "x": 10.0, "y": 20.0, "g_bits": 8000.0}, ...],
//   "obstacles": [{"id": 1, "d_safe": 4.0, "polygon": [[x, y], ...]}, ...],
//   "radio":     {"thresholds_m": [...], "rates_bps": [...], "energy_j_per_bit": [...]},
//   "initial":   {"x": ..., "y": ..., "theta": ...}
// }
//
// The first node is the base station.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "viaplan/scene.hpp"

namespace viaplan {

struct BadScenarioFile : Error { using Error::Error; };

inline nlohmann::json scenario_to_json(const Scenario& s) {
    nlohmann::json j;
    j["robot"] = {{"v", s.robot.v}, {"u_M", s.robot.u_max}};
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : s.nodes) {
        j["nodes"].push_back({{"id", n.id},
                              {"x", n.location.x},
                              {"y", n.location.y},
                              {"g_bits", n.data_load_bits}});
    }
    j["obstacles"] = nlohmann::json::array();
    for (const auto& o : s.obstacles) {
        nlohmann::json poly = nlohmann::json::array();
        for (const auto& p : o.raw_shape) poly.push_back({p.x, p.y});
        j["obstacles"].push_back({{"id", o.id}, {"d_safe", o.d_safe}, {"polygon", poly}});
    }
    j["radio"] = {{"thresholds_m", s.radio.thresholds_m},
                  {"rates_bps", s.radio.rates_bps},
                  {"energy_j_per_bit", s.radio.energy_j_per_bit}};
    j["initial"] = {{"x", s.initial_config.position.x},
                    {"y", s.initial_config.position.y},
                    {"theta", s.initial_config.heading}};
    return j;
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    try {
        Scenario s;
        s.robot.v = j.at("robot").at("v").get<double>();
        s.robot.u_max = j.at("robot").at("u_M").get<double>();
        for (const auto& jn : j.at("nodes")) {
            SensorNode n;
            n.id = jn.at("id").get<int>();
            n.location = {jn.at("x").get<double>(), jn.at("y").get<double>()};
            n.data_load_bits = jn.value("g_bits", 0.0);
            s.nodes.push_back(n);
        }
        for (const auto& jo : j.value("obstacles", nlohmann::json::array())) {
            std::vector<Point> poly;
            for (const auto& jp : jo.at("polygon")) {
                poly.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
            }
            s.obstacles.emplace_back(jo.at("id").get<int>(), std::move(poly),
                                     jo.at("d_safe").get<double>());
        }
        if (j.contains("radio")) {
            s.radio.thresholds_m = j["radio"].at("thresholds_m").get<std::vector<double>>();
            s.radio.rates_bps = j["radio"].at("rates_bps").get<std::vector<double>>();
            s.radio.energy_j_per_bit = j["radio"].at("energy_j_per_bit").get<std::vector<double>>();
        } else {
            s.radio = default_radio();
        }
        s.initial_config = Configuration({j.at("initial").at("x").get<double>(),
                                          j.at("initial").at("y").get<double>()},
                                         j.at("initial").at("theta").get<double>());
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw BadScenarioFile(std::string("malformed scenario: ") + e.what());
    }
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadScenarioFile("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw BadScenarioFile(std::string("cannot parse scenario file: ") + e.what());
    }
    return scenario_from_json(j);
}

inline void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw BadScenarioFile("cannot write scenario file: " + path);
    out << scenario_to_json(s).dump(2) << "\n";
}

}  // namespace viaplan
