#pragma once

// Energy accounting for the collection-mode comparison: multihop routing to
// the base over the radio staircase versus single-hop upload to a visiting
// robot plus the robot's locomotion cost.

#include <queue>
#include <vector>

#include "viaplan/scene.hpp"

namespace viaplan {

struct DisconnectedNode : Error { using Error::Error; };

struct EnergyReport {
    double e_multihop = 0.0;
    double e_node = 0.0;
    double e_robot = 0.0;
    double e_singlehop = 0.0;  // e_node + e_robot
    std::vector<int> hops;     // shortest-hop count to the base per node
};

/// Shortest-hop routing to the base (nodes are adjacent within d_max), energy
/// summed per link over the staircase. Throws when a node cannot reach the
/// base.
inline EnergyReport multihop_energy(const Scenario& s) {
    const size_t n = s.nodes.size();
    const double d_max = s.radio.d_max();

    std::vector<int> hops(n, -1);
    std::vector<int> parent(n, -1);
    std::queue<size_t> frontier;
    hops[0] = 0;
    frontier.push(0);
    while (!frontier.empty()) {
        const size_t u = frontier.front();
        frontier.pop();
        for (size_t v = 0; v < n; ++v) {
            if (hops[v] >= 0) continue;
            if (distance(s.nodes[u].location, s.nodes[v].location) <= d_max) {
                hops[v] = hops[u] + 1;
                parent[v] = static_cast<int>(u);
                frontier.push(v);
            }
        }
    }

    EnergyReport report;
    report.hops.assign(hops.begin(), hops.end());
    for (size_t i = 1; i < n; ++i) {
        if (hops[i] < 0) {
            throw DisconnectedNode("node " + std::to_string(s.nodes[i].id) +
                                   " cannot reach the base over the radio range");
        }
        double per_bit = 0.0;
        for (int v = static_cast<int>(i); parent[static_cast<size_t>(v)] >= 0;
             v = parent[static_cast<size_t>(v)]) {
            const int p = parent[static_cast<size_t>(v)];
            per_bit += energy_rate_at(s.radio, distance(s.nodes[static_cast<size_t>(v)].location,
                                                        s.nodes[static_cast<size_t>(p)].location));
        }
        report.e_multihop += per_bit * s.nodes[i].data_load_bits;
    }
    return report;
}

/// Robot-assisted collection: every node uploads once at the tier-1 energy
/// rate, the robot pays lambda joules per meter of path.
inline EnergyReport singlehop_energy(const Scenario& s, double total_path_length_m,
                                     double lambda_j_per_m = 0.035) {
    EnergyReport report;
    const double e1 = s.radio.energy_j_per_bit.empty() ? 0.0 : s.radio.energy_j_per_bit.front();
    for (size_t i = 1; i < s.nodes.size(); ++i) {
        report.e_node += e1 * s.nodes[i].data_load_bits;
    }
    report.e_robot = lambda_j_per_m * total_path_length_m;
    report.e_singlehop = report.e_node + report.e_robot;
    return report;
}

/// Combined report for one scenario and one plan.
inline EnergyReport energy_compare(const Scenario& s, double total_path_length_m,
                                   double lambda_j_per_m = 0.035) {
    EnergyReport multi = multihop_energy(s);
    const EnergyReport single = singlehop_energy(s, total_path_length_m, lambda_j_per_m);
    multi.e_node = single.e_node;
    multi.e_robot = single.e_robot;
    multi.e_singlehop = single.e_singlehop;
    return multi;
}

}  // namespace viaplan
