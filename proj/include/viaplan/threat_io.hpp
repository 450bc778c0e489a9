#pragma once

// Threat scenario file format:
// {
//   "region": {"circle": {"x", "y", "R"}} or {"polygon": [[x, y], ...]},
//   "agents": [{"x", "y", "R", "f": "linear"}, ...],
//   "start":  {"x", "y", "theta"},
//   "goal":   {"x", "y"},
//   "robot":  {"v", "u_M"}
// }

#include <algorithm>
#include <fstream>
#include <string>

#include <json.hpp>

#include "viaplan/scenario_io.hpp"
#include "viaplan/threat.hpp"

namespace viaplan {

inline nlohmann::json threat_scenario_to_json(const ThreatScenario& ts) {
    nlohmann::json j;
    if (ts.region.kind == RegionBoundary::Kind::Circle) {
        j["region"] = {{"circle",
                        {{"x", ts.region.circle.center.x},
                         {"y", ts.region.circle.center.y},
                         {"R", ts.region.circle.radius}}}};
    } else {
        nlohmann::json poly = nlohmann::json::array();
        for (const Point& p : ts.region.polygon) poly.push_back({p.x, p.y});
        j["region"] = {{"polygon", poly}};
    }
    j["agents"] = nlohmann::json::array();
    for (const auto& a : ts.agents) {
        j["agents"].push_back(
            {{"x", a.position.x}, {"y", a.position.y}, {"R", a.radius}, {"f", "linear"}});
    }
    j["start"] = {{"x", ts.start.position.x}, {"y", ts.start.position.y},
                  {"theta", ts.start.heading}};
    j["goal"] = {{"x", ts.goal.x}, {"y", ts.goal.y}};
    j["robot"] = {{"v", ts.robot.v}, {"u_M", ts.robot.u_max}};
    return j;
}

inline ThreatScenario threat_scenario_from_json(const nlohmann::json& j) {
    try {
        ThreatScenario ts;
        const auto& jr = j.at("region");
        if (jr.contains("circle")) {
            ts.region.kind = RegionBoundary::Kind::Circle;
            ts.region.circle = {{jr["circle"].at("x").get<double>(),
                                 jr["circle"].at("y").get<double>()},
                                jr["circle"].at("R").get<double>()};
        } else {
            ts.region.kind = RegionBoundary::Kind::Polygon;
            for (const auto& jp : jr.at("polygon")) {
                ts.region.polygon.push_back({jp.at(0).get<double>(), jp.at(1).get<double>()});
            }
            // containment tests assume counterclockwise winding
            double area2 = 0.0;
            const auto& poly = ts.region.polygon;
            for (size_t i = 0; i < poly.size(); ++i) {
                area2 += poly[i].cross(poly[(i + 1) % poly.size()]);
            }
            if (area2 < 0.0) std::reverse(ts.region.polygon.begin(), ts.region.polygon.end());
        }
        for (const auto& ja : j.value("agents", nlohmann::json::array())) {
            ThreatAgent a;
            a.position = {ja.at("x").get<double>(), ja.at("y").get<double>()};
            a.radius = ja.at("R").get<double>();
            ts.agents.push_back(std::move(a));
        }
        ts.start = Configuration({j.at("start").at("x").get<double>(),
                                  j.at("start").at("y").get<double>()},
                                 j.at("start").at("theta").get<double>());
        ts.goal = {j.at("goal").at("x").get<double>(), j.at("goal").at("y").get<double>()};
        ts.robot.v = j.at("robot").at("v").get<double>();
        ts.robot.u_max = j.at("robot").at("u_M").get<double>();
        return ts;
    } catch (const nlohmann::json::exception& e) {
        throw BadScenarioFile(std::string("malformed threat scenario: ") + e.what());
    }
}

inline ThreatScenario load_threat_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw BadScenarioFile("cannot open threat scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw BadScenarioFile(std::string("cannot parse threat scenario file: ") + e.what());
    }
    return threat_scenario_from_json(j);
}

inline void save_threat_scenario(const ThreatScenario& ts, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw BadScenarioFile("cannot write threat scenario file: " + path);
    out << threat_scenario_to_json(ts).dump(2) << "\n";
}

}  // namespace viaplan
