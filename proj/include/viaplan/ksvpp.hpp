#pragma once

// Multi-robot planning. The baseline splits one whole tour into k clusters of
// roughly equal path length and builds each cluster path from the split order
// as-is; the improved planner re-runs the single-robot planner inside every
// cluster. Both share the same split, so the improved k-length never exceeds
// the baseline's.

#include <algorithm>
#include <vector>

#include "viaplan/svpp.hpp"

namespace viaplan {

struct KTooLarge : Error { using Error::Error; };

struct KPlan {
    std::vector<std::vector<int>> clusters;  // circle element ids, base first
    std::vector<ViablePath> paths;
    std::vector<double> lengths;
    double k_length = 0.0;  // max over the k paths
};

inline double split_threshold(int l, int k, double total, double l_max) {
    return (static_cast<double>(l) / k) * (total - 2.0 * l_max) + l_max;
}

namespace detail {

// Shortest one-hop subpath from the start configuration to a circle: contact
// arc on the base plus the best rotation-compatible tangent. Falls back to
// the mean-length detour estimate for blocked pairs.
inline double start_to_circle_length(const Scenario& s, const TangentGraph& g, int base_elem,
                                     int target) {
    const Circle bc = g.elements[static_cast<size_t>(base_elem)].circle;
    const double param = angle_of(s.initial_config.position - bc.center);
    const Point snapped = bc.center + bc.radius * unit_from_angle(param);
    const RotDir dir = rotation_from_heading(bc, snapped, s.initial_config.heading);
    double best = std::numeric_limits<double>::infinity();
    for (const GraphTangent* t : g.tangents_between(base_elem, target)) {
        if (t->from_dir != dir) continue;
        best = std::min(best,
                        g.adjusted_traverse(base_elem, param, t->from_param, dir) + t->length);
    }
    if (!std::isfinite(best)) {
        const auto mean = mean_tangent_lengths(g);
        std::vector<int> chain;
        double total = 0.0;
        if (detour_chain(g, mean, base_elem, target, &chain, &total)) best = total;
    }
    return best;
}

}  // namespace detail

/// Split the whole tour into k clusters: cluster l ends at the last circle
/// whose along-path arrival length stays within (l/k)(L - 2*L_max) + L_max,
/// where L_max is the largest direct start-to-circle subpath length. Every
/// cluster contains the base; a threshold that admits no circle leaves a
/// degenerate base-only cluster.
inline std::vector<std::vector<int>> split_tour(const Scenario& s, const TangentGraph& g,
                                                const SvppResult& whole, int k) {
    const int n = static_cast<int>(whole.permutation.order.size());
    if (k < 1 || k > std::max(1, n - 1)) {
        throw KTooLarge("k must be between 1 and n-1");
    }
    if (k == 1) return {whole.permutation.order};

    const std::vector<double>& arrivals = whole.circle_arrival_lengths;
    const double total = whole.length;

    const int base_elem = whole.permutation.order.front();
    double l_max = 0.0;
    for (int i = 1; i < n; ++i) {
        const double d = detail::start_to_circle_length(
            s, g, base_elem, whole.permutation.order[static_cast<size_t>(i)]);
        if (std::isfinite(d)) l_max = std::max(l_max, d);
    }

    std::vector<int> split_idx;  // i(l) for l = 1..k-1, tour positions
    for (int l = 1; l < k; ++l) {
        const double threshold = split_threshold(l, k, total, l_max);
        int last = 0;
        for (int i = 1; i < n; ++i) {
            if (arrivals[static_cast<size_t>(i)] <= threshold) last = i;
        }
        split_idx.push_back(last);
    }

    std::vector<std::vector<int>> clusters;
    int start = 1;
    for (int l = 0; l < k; ++l) {
        const int end = l + 1 < k ? split_idx[static_cast<size_t>(l)] : n - 1;
        std::vector<int> cluster = {whole.permutation.order.front()};
        for (int i = std::max(start, 1); i <= end; ++i) {
            cluster.push_back(whole.permutation.order[static_cast<size_t>(i)]);
        }
        clusters.push_back(std::move(cluster));
        start = end + 1;
    }
    return clusters;
}

namespace detail {

inline std::pair<ViablePath, double> cluster_path_fixed_order(const Scenario& s,
                                                              const TangentGraph& g,
                                                              const std::vector<int>& cluster) {
    if (cluster.size() == 1) {
        // Degenerate base-only cluster: ride the adjusted base circle.
        Permutation perm;
        perm.order = cluster;
        auto [ext, simplified] = extend_permutation(perm, g);
        const TreeLikeGraph tree = build_tree(g, simplified, ext, s.initial_config);
        DpResult dp = shortest_path_dp(g, tree);
        return {std::move(dp.path), dp.length};
    }
    Permutation perm;
    perm.order = cluster;
    SvppResult r = construct_robust(s, g, perm);
    return {std::move(r.path), r.length};
}

// Full planner inside one cluster: solve the restricted ATSP, but never
// return an order worse than the incumbent split order.
inline std::pair<ViablePath, double> cluster_path_replanned(const Scenario& s,
                                                            const TangentGraph& g,
                                                            const std::vector<int>& cluster) {
    auto incumbent = cluster_path_fixed_order(s, g, cluster);
    const int nc = static_cast<int>(cluster.size());
    if (nc <= 2) return incumbent;

    const auto full_cost = atsp_costs(g);
    std::vector<std::vector<double>> cost(static_cast<size_t>(nc),
                                          std::vector<double>(static_cast<size_t>(nc)));
    for (int i = 0; i < nc; ++i) {
        for (int j = 0; j < nc; ++j) {
            cost[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                full_cost[static_cast<size_t>(cluster[static_cast<size_t>(i)])]
                         [static_cast<size_t>(cluster[static_cast<size_t>(j)])];
        }
    }
    std::vector<int> local =
        nc <= 9 ? exhaustive_tour(cost, nc) : nearest_neighbor_tour(cost, nc);
    if (nc > 9) improve_tour(cost, &local);

    Permutation perm;
    for (int idx : local) perm.order.push_back(cluster[static_cast<size_t>(idx)]);
    try {
        SvppResult r = construct_robust(s, g, perm);
        if (r.length < incumbent.second - 1e-12) return {std::move(r.path), r.length};
    } catch (const Error&) {
        // fall back to the incumbent order
    }
    return incumbent;
}

inline KPlan assemble_kplan(std::vector<std::vector<int>> clusters,
                            std::vector<std::pair<ViablePath, double>> parts) {
    KPlan plan;
    plan.clusters = std::move(clusters);
    for (auto& [path, len] : parts) {
        plan.paths.push_back(std::move(path));
        plan.lengths.push_back(len);
        plan.k_length = std::max(plan.k_length, len);
    }
    return plan;
}

}  // namespace detail

/// Baseline: split the whole tour, then build each cluster path directly from
/// the split order with no re-optimization.
inline KPlan plan_viable_ksplitour(const Scenario& s, const TangentGraph& g,
                                   const SvppResult& whole, int k) {
    auto clusters = split_tour(s, g, whole, k);
    std::vector<std::pair<ViablePath, double>> parts;
    for (const auto& cluster : clusters) {
        parts.push_back(detail::cluster_path_fixed_order(s, g, cluster));
    }
    return detail::assemble_kplan(std::move(clusters), std::move(parts));
}

inline KPlan plan_viable_ksplitour(const Scenario& s, int k) {
    const TangentGraph g = build_tangent_graph(s);
    const SvppResult whole = construct_robust(s, g, compute_permutation(g, s));
    return plan_viable_ksplitour(s, g, whole, k);
}

/// Improved planner: same clusters, each re-planned by the full single-robot
/// pipeline. Its k-length never exceeds the baseline's.
inline KPlan plan_ksvpp(const Scenario& s, const TangentGraph& g, const SvppResult& whole, int k) {
    auto clusters = split_tour(s, g, whole, k);
    std::vector<std::pair<ViablePath, double>> parts;
    for (const auto& cluster : clusters) {
        parts.push_back(detail::cluster_path_replanned(s, g, cluster));
    }
    return detail::assemble_kplan(std::move(clusters), std::move(parts));
}

inline KPlan plan_ksvpp(const Scenario& s, int k) {
    const TangentGraph g = build_tangent_graph(s);
    const SvppResult whole = construct_robust(s, g, compute_permutation(g, s));
    return plan_ksvpp(s, g, whole, k);
}

}  // namespace viaplan
