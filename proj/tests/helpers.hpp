#pragma once

// Shared scenario builders for the test suites.

#include <vector>

#include "viaplan/scene.hpp"

namespace testutil {

using viaplan::Configuration;
using viaplan::Obstacle;
using viaplan::Point;
using viaplan::Scenario;
using viaplan::SensorNode;

/// Scenario with the given node locations; nodes[0] is the base. The initial
/// configuration sits on the east point of the base circle heading south
/// (clockwise around the base).
inline Scenario make_scenario(const std::vector<Point>& locations, double v = 3.0,
                              double u_max = 1.0, double g_bits = 0.0) {
    Scenario s;
    s.robot = {v, u_max};
    s.radio = viaplan::default_radio();
    for (size_t i = 0; i < locations.size(); ++i) {
        SensorNode n;
        n.id = static_cast<int>(i) + 1;
        n.location = locations[i];
        n.data_load_bits = i == 0 ? 0.0 : g_bits;
        s.nodes.push_back(n);
    }
    const double r = s.r_min();
    s.initial_config = Configuration(locations[0] + Point{r, 0.0}, -viaplan::kPi / 2.0);
    return s;
}

inline void add_box_obstacle(Scenario* s, Point lo, Point hi, double d_safe, int id = 0) {
    std::vector<Point> poly = {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}};
    s->obstacles.emplace_back(id == 0 ? static_cast<int>(s->obstacles.size()) + 1 : id,
                              std::move(poly), d_safe);
}

}  // namespace testutil
