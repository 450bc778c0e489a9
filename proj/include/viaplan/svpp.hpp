#pragma once

// Shortest viable path planning for a single data-collection robot:
//  1. visiting order from an ATSP instance over the tangent graph,
//  2. insertion of blocking safety boundaries into the order,
//  3. layer-by-layer tree-like graph of arrival configurations,
//  4. dynamic-programming shortest path with the closing arc,
//  5. assembly into exact line/arc primitives.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "viaplan/path.hpp"
#include "viaplan/scene.hpp"
#include "viaplan/tangent_graph.hpp"

namespace viaplan {

struct DisconnectedGraph : Error { using Error::Error; };
struct NoDetourExists : Error { using Error::Error; };
struct InitialConfigOffCircle : Error { using Error::Error; };

struct Permutation {
    std::vector<int> order;  // visiting-circle element ids, order[0] is the base
};

struct ExtendedPermutation {
    std::vector<int> order;     // element ids including inserted safety boundaries
    std::vector<char> is_stop;  // aligned with order; false for inserted detours
    int blocking_count = 0;     // K
};

/// Tangent edges surviving between consecutive order elements (hop h connects
/// order[h] to order[(h+1) % n']).
struct SimplifiedGraph {
    std::vector<std::vector<GraphTangent>> hop_tangents;
};

struct TreeNode {
    int element = -1;
    double param = 0.0;
    Point position;
    RotDir dir = RotDir::CCW;
};

struct TreeLikeGraph {
    std::vector<int> order;
    std::vector<std::vector<TreeNode>> layers;  // n'+1 layers, layers[0] = {X0}
    SimplifiedGraph hops;
    TreeNode x0;
    bool full_tangent_sets = true;  // all four tangents survive on every hop
};

// ---------------------------------------------------------------------------
// Mean inter-element lengths and ATSP costs
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<std::vector<double>> mean_tangent_lengths(const TangentGraph& g) {
    const int m = static_cast<int>(g.elements.size());
    std::vector<std::vector<double>> mean(static_cast<size_t>(m),
                                          std::vector<double>(static_cast<size_t>(m),
                                                              std::numeric_limits<double>::infinity()));
    std::vector<std::vector<int>> count(static_cast<size_t>(m),
                                        std::vector<int>(static_cast<size_t>(m), 0));
    std::vector<std::vector<double>> sum(static_cast<size_t>(m),
                                         std::vector<double>(static_cast<size_t>(m), 0.0));
    for (const auto& t : g.tangents) {
        sum[static_cast<size_t>(t.from_element)][static_cast<size_t>(t.to_element)] += t.length;
        count[static_cast<size_t>(t.from_element)][static_cast<size_t>(t.to_element)] += 1;
    }
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (count[static_cast<size_t>(i)][static_cast<size_t>(j)] > 0) {
                mean[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    sum[static_cast<size_t>(i)][static_cast<size_t>(j)] /
                    count[static_cast<size_t>(i)][static_cast<size_t>(j)];
            }
        }
    }
    return mean;
}

// Shortest source->target over elements, preferring obstacle hulls as
// intermediates; weights are mean tangent lengths. With `allow_circles` other
// visiting circles may serve as detour waypoints as well (a circle can block
// every direct tangent of a pair). Returns the intermediate chain, or false
// when unreachable.
inline bool detour_chain(const TangentGraph& g,
                         const std::vector<std::vector<double>>& mean, int src, int dst,
                         std::vector<int>* chain, double* total, bool allow_circles = false,
                         bool ban_direct = false) {
    const int m = static_cast<int>(g.elements.size());
    std::vector<double> dist(static_cast<size_t>(m), std::numeric_limits<double>::infinity());
    std::vector<int> prev(static_cast<size_t>(m), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    dist[static_cast<size_t>(src)] = 0.0;
    pq.push({0.0, src});
    while (!pq.empty()) {
        const auto [d, u] = pq.top();
        pq.pop();
        if (d > dist[static_cast<size_t>(u)]) continue;
        if (u == dst) break;
        for (int v = 0; v < m; ++v) {
            if (v != dst && !allow_circles &&
                g.elements[static_cast<size_t>(v)].kind != Element::Kind::ObstacleHull)
                continue;
            if (v == src) continue;
            if (ban_direct && u == src && v == dst) continue;
            const double w = mean[static_cast<size_t>(u)][static_cast<size_t>(v)];
            if (!std::isfinite(w)) continue;
            if (d + w < dist[static_cast<size_t>(v)] - 1e-15) {
                dist[static_cast<size_t>(v)] = d + w;
                prev[static_cast<size_t>(v)] = u;
                pq.push({d + w, v});
            }
        }
    }
    if (!std::isfinite(dist[static_cast<size_t>(dst)])) return false;
    chain->clear();
    for (int v = prev[static_cast<size_t>(dst)]; v != -1 && v != src;
         v = prev[static_cast<size_t>(v)]) {
        chain->push_back(v);
    }
    std::reverse(chain->begin(), chain->end());
    *total = dist[static_cast<size_t>(dst)];
    return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Step 2-3: extended permutation and simplified graph
// ---------------------------------------------------------------------------

/// Insert blocking safety boundaries between consecutive circles that have no
/// surviving direct tangent; K counts insertions (one obstacle may be
/// inserted more than once). A pair whose tangents are all blocked by another
/// visiting circle detours around that circle instead. With `augment_partial`
/// a detour is also inserted wherever some of the four tangents are blocked,
/// which restores closing-direction choices that partial pairs can lose.
inline std::pair<ExtendedPermutation, SimplifiedGraph> extend_permutation(
        const Permutation& perm, const TangentGraph& g, bool augment_partial = false) {
    const auto mean = detail::mean_tangent_lengths(g);
    ExtendedPermutation ext;
    const size_t n = perm.order.size();
    for (size_t i = 0; i < n; ++i) {
        const int a = perm.order[i];
        const int b = perm.order[(i + 1) % n];
        ext.order.push_back(a);
        ext.is_stop.push_back(1);
        if (n == 1) break;
        const size_t direct = g.tangents_between(a, b).size();
        if (direct == 4 || (direct > 0 && !augment_partial)) continue;
        const bool ban_direct = direct > 0;
        std::vector<int> chain;
        double total = 0.0;
        if (!detail::detour_chain(g, mean, a, b, &chain, &total, false, ban_direct) ||
            chain.empty()) {
            if (!detail::detour_chain(g, mean, a, b, &chain, &total, true, ban_direct) ||
                chain.empty()) {
                if (direct > 0) continue;  // keep the partial pair as-is
                throw NoDetourExists("no tangent route between consecutive visiting circles");
            }
        }
        for (int h : chain) {
            ext.order.push_back(h);
            ext.is_stop.push_back(0);
            ext.blocking_count += 1;
        }
    }

    SimplifiedGraph simplified;
    const size_t np = ext.order.size();
    for (size_t i = 0; i < np && np > 1; ++i) {
        const int a = ext.order[i];
        const int b = ext.order[(i + 1) % np];
        std::vector<GraphTangent> hop;
        for (const GraphTangent* t : g.tangents_between(a, b)) hop.push_back(*t);
        if (hop.empty()) {
            throw NoDetourExists("inserted boundary is not reachable by tangents");
        }
        simplified.hop_tangents.push_back(std::move(hop));
    }
    return {std::move(ext), std::move(simplified)};
}

// ---------------------------------------------------------------------------
// Step 4: tree-like graph
// ---------------------------------------------------------------------------

inline TreeLikeGraph build_tree(const TangentGraph& g, const SimplifiedGraph& simplified,
                                const ExtendedPermutation& ext, const Configuration& x0) {
    TreeLikeGraph tree;
    tree.order = ext.order;
    tree.hops = simplified;

    const Element& base = g.elements[static_cast<size_t>(ext.order.front())];
    const Circle bc = base.circle;
    if (std::abs(distance(x0.position, bc.center) - bc.radius) > 1e-6 * std::max(1.0, bc.radius)) {
        throw InitialConfigOffCircle("initial configuration is not on the first visiting circle");
    }
    TreeNode root;
    root.element = ext.order.front();
    root.param = angle_of(x0.position - bc.center);
    root.position = bc.center + bc.radius * unit_from_angle(root.param);
    try {
        root.dir = rotation_from_heading(bc, root.position, x0.heading);
    } catch (const DegenerateTangency&) {
        throw InitialConfigOffCircle("initial heading is not tangent to the first visiting circle");
    }
    tree.x0 = root;
    tree.layers.push_back({root});

    const size_t np = ext.order.size();
    for (size_t h = 0; h < np && np > 1; ++h) {
        const auto& hop = simplified.hop_tangents[h];
        tree.full_tangent_sets = tree.full_tangent_sets && hop.size() == 4;
        std::vector<TreeNode> layer;
        for (const auto& t : hop) {
            TreeNode node;
            node.element = t.to_element;
            node.param = t.to_param;
            node.position = t.to_point;
            node.dir = t.to_dir;
            bool dup = false;
            for (const auto& seen : layer) {
                if (seen.dir == node.dir && distance(seen.position, node.position) <= g.eps) {
                    dup = true;
                }
            }
            if (!dup) layer.push_back(node);
        }
        tree.layers.push_back(std::move(layer));
    }
    if (np == 1) tree.layers.push_back({root});
    return tree;
}

// ---------------------------------------------------------------------------
// Step 5: dynamic-programming search and path assembly
// ---------------------------------------------------------------------------

namespace detail {

// Append the exact primitives for riding `element` from param `from` to
// param `to` in `dir`; visiting circles get the reading adjustment.
inline void emit_traversal(const TangentGraph& g, int element, double from, double to, RotDir dir,
                           ViablePath* path) {
    const Element& e = g.elements[static_cast<size_t>(element)];
    if (e.kind == Element::Kind::VisitingCircle) {
        const double raw = e.traverse_length(from, to, dir);
        const int turns = adjustment_extra_turns(raw, g.adjustment_for_element(element));
        const Point a = e.point_at(from);
        if (raw <= 1e-12) {
            // rounding across coincident endpoints must not become a full turn
            if (turns == 0) return;
            path->push(PathSegment::arc(e.circle, a, a, dir, turns, e.node_index));
            return;
        }
        const Point b = e.point_at(to);
        path->push(PathSegment::arc(e.circle, a, b, dir, turns, e.node_index));
        return;
    }

    // Hull ride: split into the underlying corner arcs and offset edges.
    const SmoothHull& hull = e.hull;
    double remaining = hull.traverse_length(from, to, dir);
    if (remaining <= 1e-12) return;
    const auto& pieces = hull.pieces();
    const int count = static_cast<int>(pieces.size());
    const double sw = hull.wrap_param(from);
    int pi = hull.piece_index_at(sw);
    double local = sw - pieces[static_cast<size_t>(pi)].s0();  // offset inside the piece

    const auto emit_chunk = [&](int piece_idx, double sa, double sb) {
        const auto& piece = pieces[static_cast<size_t>(piece_idx)];
        const Point a = hull.point_at(sa);
        const Point b = hull.point_at(sb);
        if (piece.is_arc) {
            path->push(PathSegment::arc(hull.corner_circle(piece.arc.corner), a, b, dir));
        } else {
            path->push(PathSegment::line(a, b));
        }
    };

    while (remaining > 1e-12) {
        const auto& piece = pieces[static_cast<size_t>(pi)];
        if (dir == RotDir::CCW) {
            const double avail = piece.len() - local;
            if (avail <= 1e-12) {
                pi = (pi + 1) % count;
                local = 0.0;
                continue;
            }
            const double take = std::min(remaining, avail);
            emit_chunk(pi, piece.s0() + local, piece.s0() + local + take);
            local += take;
            remaining -= take;
        } else {
            if (local <= 1e-12) {
                pi = (pi + count - 1) % count;
                local = pieces[static_cast<size_t>(pi)].len();
                continue;
            }
            const double take = std::min(remaining, local);
            emit_chunk(pi, piece.s0() + local, piece.s0() + local - take);
            local -= take;
            remaining -= take;
        }
    }
}

inline double hop_cost(const TangentGraph& g, const TreeNode& z, const GraphTangent& t) {
    return g.adjusted_traverse(z.element, z.param, t.from_param, z.dir) + t.length;
}

inline int find_layer_node(const std::vector<TreeNode>& layer, Point pos, RotDir dir, double eps) {
    for (size_t i = 0; i < layer.size(); ++i) {
        if (layer[i].dir == dir && distance(layer[i].position, pos) <= eps) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

// Closed tour that never leaves the base circle: the full circle plus the
// base node's reading adjustment.
inline ViablePath single_circle_path(const TangentGraph& g, const TreeLikeGraph& tree) {
    const Element& base = g.elements[static_cast<size_t>(tree.order.front())];
    const AdjustmentParams& adj = g.adjustment_for_element(tree.order.front());
    ViablePath path;
    path.push(PathSegment::arc(base.circle, tree.x0.position, tree.x0.position, tree.x0.dir,
                               adj.full_turns + 1, base.node_index));
    return path;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Shortest path search over the tree-like graph
// ---------------------------------------------------------------------------

struct DpResult {
    double length = std::numeric_limits<double>::infinity();
    ViablePath path;
    std::vector<double> arrival_prefix;  // cumulative cost at each chosen layer arrival
};

/// Layered minimization L*(1, i+1) = min { L*(1, i) + L(i, i+1) } with the
/// closing arc back to X0 as the terminal cost; reconstructs the path.
inline DpResult shortest_path_dp(const TangentGraph& g, const TreeLikeGraph& tree) {
    DpResult result;
    const size_t np = tree.order.size();
    if (np == 1) {
        result.path = detail::single_circle_path(g, tree);
        result.length = result.path.total_length;
        result.arrival_prefix = {0.0, result.length};
        return result;
    }

    struct Cell {
        double cost = std::numeric_limits<double>::infinity();
        int parent = -1;
        const GraphTangent* via = nullptr;
    };
    std::vector<std::vector<Cell>> best(tree.layers.size());
    for (size_t h = 0; h < tree.layers.size(); ++h) {
        best[h].resize(tree.layers[h].size());
    }
    best[0][0].cost = 0.0;

    for (size_t h = 0; h < np; ++h) {
        const auto& layer = tree.layers[h];
        const auto& next = tree.layers[h + 1];
        for (size_t i = 0; i < layer.size(); ++i) {
            if (!std::isfinite(best[h][i].cost)) continue;
            for (const auto& t : tree.hops.hop_tangents[h]) {
                if (t.from_dir != layer[i].dir) continue;
                const int j = detail::find_layer_node(next, t.to_point, t.to_dir, g.eps);
                if (j < 0) continue;
                const double c = best[h][i].cost + detail::hop_cost(g, layer[i], t);
                if (c < best[h + 1][static_cast<size_t>(j)].cost - 1e-15) {
                    best[h + 1][static_cast<size_t>(j)] = {c, static_cast<int>(i), &t};
                }
            }
        }
    }

    // Terminal: arrivals on the base circle whose rotation sense matches X0,
    // plus the closing contact arc to X0.
    const auto& last = tree.layers[np];
    int pick = -1;
    double total = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < last.size(); ++i) {
        if (!std::isfinite(best[np][i].cost)) continue;
        if (last[i].dir != tree.x0.dir) continue;
        const double closing =
            g.adjusted_traverse(last[i].element, last[i].param, tree.x0.param, last[i].dir);
        const double c = best[np][i].cost + closing;
        if (c < total - 1e-15) {
            total = c;
            pick = static_cast<int>(i);
        }
    }
    if (pick < 0) {
        throw DisconnectedGraph("no heading-feasible closed path in the tree-like graph");
    }

    // Reconstruct the chain z*_1 ... z*_{n'+1}.
    std::vector<int> chain(np + 1, -1);
    chain[np] = pick;
    for (size_t h = np; h > 0; --h) {
        chain[h - 1] = best[h][static_cast<size_t>(chain[h])].parent;
    }
    result.arrival_prefix.resize(np + 1);
    for (size_t h = 0; h <= np; ++h) {
        result.arrival_prefix[h] = best[h][static_cast<size_t>(chain[h])].cost;
    }

    ViablePath path;
    for (size_t h = 0; h < np; ++h) {
        const TreeNode& z = tree.layers[h][static_cast<size_t>(chain[h])];
        const GraphTangent* t = best[h + 1][static_cast<size_t>(chain[h + 1])].via;
        detail::emit_traversal(g, z.element, z.param, t->from_param, z.dir, &path);
        path.push(PathSegment::line(t->from_point, t->to_point));
    }
    const TreeNode& zlast = tree.layers[np][static_cast<size_t>(chain[np])];
    detail::emit_traversal(g, zlast.element, zlast.param, tree.x0.param, zlast.dir, &path);

    result.length = total;
    result.path = std::move(path);
    return result;
}

/// Exhaustive walk over every root-to-leaf choice; used to confirm the path
/// count law and as the optimality oracle at small sizes.
struct TreeEnumeration {
    std::uint64_t viable_paths = 0;
    double min_length = std::numeric_limits<double>::infinity();
};

inline TreeEnumeration enumerate_tree_paths(const TangentGraph& g, const TreeLikeGraph& tree) {
    TreeEnumeration out;
    const size_t np = tree.order.size();
    if (np == 1) {
        out.viable_paths = 1;
        out.min_length = detail::single_circle_path(g, tree).total_length;
        return out;
    }
    const std::function<void(size_t, const TreeNode&, double)> walk =
        [&](size_t h, const TreeNode& z, double acc) {
            if (h == np) {
                if (z.dir != tree.x0.dir) return;
                const double closing = g.adjusted_traverse(z.element, z.param, tree.x0.param, z.dir);
                out.viable_paths += 1;
                out.min_length = std::min(out.min_length, acc + closing);
                return;
            }
            for (const auto& t : tree.hops.hop_tangents[h]) {
                if (t.from_dir != z.dir) continue;
                TreeNode next;
                next.element = t.to_element;
                next.param = t.to_param;
                next.position = t.to_point;
                next.dir = t.to_dir;
                walk(h + 1, next, acc + detail::hop_cost(g, z, t));
            }
        };
    walk(0, tree.x0, 0.0);
    return out;
}

// ---------------------------------------------------------------------------
// Permutation and full pipeline
// ---------------------------------------------------------------------------

struct SvppResult {
    ViablePath path;
    Permutation permutation;
    ExtendedPermutation extended;
    double length = 0.0;
    int n_prime = 0;
    int blocking_count = 0;
    // Cumulative path length at the arrival on each tour circle; index 0 is
    // the base at the start (0.0).
    std::vector<double> circle_arrival_lengths;
};

/// Run steps 2-5 for a fixed visiting order.
inline SvppResult construct_for_permutation(const Scenario& s, const TangentGraph& g,
                                            const Permutation& perm,
                                            bool augment_partial = false) {
    auto [ext, simplified] = extend_permutation(perm, g, augment_partial);
    const TreeLikeGraph tree = build_tree(g, simplified, ext, s.initial_config);
    DpResult dp = shortest_path_dp(g, tree);
    SvppResult r;
    r.path = std::move(dp.path);
    r.permutation = perm;
    r.extended = std::move(ext);
    r.length = dp.length;
    r.n_prime = static_cast<int>(r.extended.order.size());
    r.blocking_count = r.extended.blocking_count;
    r.circle_arrival_lengths.push_back(0.0);
    const size_t np = r.extended.order.size();
    for (size_t h = 0; h + 1 < np; ++h) {
        if (!r.extended.is_stop[h + 1]) continue;  // inserted detours are not visits
        r.circle_arrival_lengths.push_back(dp.arrival_prefix[h + 1]);
    }
    return r;
}

namespace detail {

inline Permutation reversed_permutation(const Permutation& p) {
    Permutation r;
    r.order.push_back(p.order.front());
    for (size_t i = p.order.size(); i-- > 1;) r.order.push_back(p.order[i]);
    return r;
}

// Directed ATSP costs: mean length of valid inter-circle tangent routes plus
// the adjusted nominal arc on the target circle. Unreachable pairs stay
// infinite.
inline std::vector<std::vector<double>> atsp_costs(const TangentGraph& g) {
    const int n = g.circle_count;
    const auto mean = mean_tangent_lengths(g);
    std::vector<std::vector<double>> cost(static_cast<size_t>(n),
                                          std::vector<double>(static_cast<size_t>(n),
                                                              std::numeric_limits<double>::infinity()));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            double plen = mean[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (!std::isfinite(plen)) {
                std::vector<int> chain;
                double total = 0.0;
                if (detour_chain(g, mean, i, j, &chain, &total)) {
                    plen = total;
                } else if (detour_chain(g, mean, i, j, &chain, &total, true)) {
                    plen = total;
                } else {
                    continue;
                }
            }
            const double nominal = kPi * g.r_min;
            const double adj =
                adjusted_arc_length(nominal, g.adjustment_for_element(j), g.r_min);
            cost[static_cast<size_t>(i)][static_cast<size_t>(j)] = plen + adj;
        }
    }
    return cost;
}

inline double tour_cost(const std::vector<std::vector<double>>& cost,
                        const std::vector<int>& order) {
    double total = 0.0;
    const size_t n = order.size();
    for (size_t i = 0; i < n; ++i) {
        total += cost[static_cast<size_t>(order[i])][static_cast<size_t>(order[(i + 1) % n])];
    }
    return total;
}

inline std::vector<int> exhaustive_tour(const std::vector<std::vector<double>>& cost, int n) {
    std::vector<int> rest;
    for (int i = 1; i < n; ++i) rest.push_back(i);
    std::vector<int> best_order;
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> order(static_cast<size_t>(n));
    order[0] = 0;
    do {
        std::copy(rest.begin(), rest.end(), order.begin() + 1);
        const double c = tour_cost(cost, order);
        if (c < best - 1e-12) {
            best = c;
            best_order = order;
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best_order;
}

inline std::vector<int> nearest_neighbor_tour(const std::vector<std::vector<double>>& cost, int n) {
    std::vector<int> order = {0};
    std::vector<bool> used(static_cast<size_t>(n), false);
    used[0] = true;
    while (static_cast<int>(order.size()) < n) {
        const int cur = order.back();
        int pick = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            const double c = cost[static_cast<size_t>(cur)][static_cast<size_t>(j)];
            if (c < best - 1e-15) {
                best = c;
                pick = j;
            }
        }
        if (pick < 0) throw DisconnectedGraph("tangent graph does not connect the visiting circles");
        order.push_back(pick);
        used[static_cast<size_t>(pick)] = true;
    }
    return order;
}

// 2-opt (segment reversal) and Or-opt (segment relocation) local search with
// full-cost evaluation; costs are directed so reversals are recomputed.
inline void improve_tour(const std::vector<std::vector<double>>& cost, std::vector<int>* order) {
    const int n = static_cast<int>(order->size());
    if (n < 4) return;
    double cur = tour_cost(cost, *order);
    bool improved = true;
    while (improved) {
        improved = false;
        for (int i = 1; i < n - 1 && !improved; ++i) {
            for (int j = i + 1; j < n && !improved; ++j) {
                std::vector<int> cand = *order;
                std::reverse(cand.begin() + i, cand.begin() + j + 1);
                const double c = tour_cost(cost, cand);
                if (c < cur - 1e-9) {
                    *order = std::move(cand);
                    cur = c;
                    improved = true;
                }
            }
        }
        for (int len = 1; len <= 3 && !improved; ++len) {
            for (int i = 1; i + len <= n && !improved; ++i) {
                for (int k = 1; k + len <= n && !improved; ++k) {
                    if (k == i) continue;
                    std::vector<int> cand;
                    cand.reserve(static_cast<size_t>(n));
                    std::vector<int> seg(order->begin() + i, order->begin() + i + len);
                    std::vector<int> rest;
                    rest.insert(rest.end(), order->begin(), order->begin() + i);
                    rest.insert(rest.end(), order->begin() + i + len, order->end());
                    cand.insert(cand.end(), rest.begin(), rest.begin() + k);
                    cand.insert(cand.end(), seg.begin(), seg.end());
                    cand.insert(cand.end(), rest.begin() + k, rest.end());
                    const double c = tour_cost(cost, cand);
                    if (c < cur - 1e-9) {
                        *order = std::move(cand);
                        cur = c;
                        improved = true;
                    }
                }
            }
        }
    }
}

}  // namespace detail

/// Build for the given order, falling back to other orders when the closing
/// hop cannot match the start pose's rotation sense (a third circle can block
/// half the tangents of a pair, stranding the tour on the wrong side of the
/// base circle). Tries the reverse first, then cost-ordered alternatives.
inline SvppResult construct_robust(const Scenario& s, const TangentGraph& g,
                                   const Permutation& perm) {
    const auto attempt = [&](const Permutation& p, bool augment) -> std::optional<SvppResult> {
        try {
            return construct_for_permutation(s, g, p, augment);
        } catch (const Error&) {
            return std::nullopt;
        }
    };
    if (auto r = attempt(perm, false)) return std::move(*r);
    const Permutation rev = detail::reversed_permutation(perm);
    if (perm.order.size() >= 3) {
        if (auto r = attempt(rev, false)) return std::move(*r);
    }
    // Partial tangent sets can strand the closing hop on one rotation sense;
    // detour augmentation restores the missing choices.
    if (auto r = attempt(perm, true)) return std::move(*r);
    if (perm.order.size() >= 3) {
        if (auto r = attempt(rev, true)) return std::move(*r);
    }

    // Cost-ordered sweep over alternative orders of the same circles.
    const auto full_cost = detail::atsp_costs(g);
    const auto cost_of = [&](const std::vector<int>& order) {
        double total = 0.0;
        for (size_t i = 0; i < order.size(); ++i) {
            total += full_cost[static_cast<size_t>(order[i])]
                              [static_cast<size_t>(order[(i + 1) % order.size()])];
        }
        return total;
    };
    std::vector<std::vector<int>> candidates;
    const size_t n = perm.order.size();
    if (n <= 9) {
        std::vector<int> rest(perm.order.begin() + 1, perm.order.end());
        std::sort(rest.begin(), rest.end());
        do {
            std::vector<int> order = {perm.order.front()};
            order.insert(order.end(), rest.begin(), rest.end());
            candidates.push_back(std::move(order));
        } while (std::next_permutation(rest.begin(), rest.end()));
    } else {
        for (size_t i = 1; i + 1 < n; ++i) {
            for (size_t j = i + 1; j < n; ++j) {
                std::vector<int> order = perm.order;
                std::reverse(order.begin() + static_cast<long>(i),
                             order.begin() + static_cast<long>(j) + 1);
                candidates.push_back(std::move(order));
            }
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](const std::vector<int>& a, const std::vector<int>& b) {
                         return cost_of(a) < cost_of(b);
                     });
    int budget = 512;
    for (const auto& order : candidates) {
        if (budget-- <= 0) break;
        Permutation p;
        p.order = order;
        if (auto r = attempt(p, false)) return std::move(*r);
        if (auto r = attempt(p, true)) return std::move(*r);
    }
    throw DisconnectedGraph("no visiting order yields a heading-feasible closed tour");
}

/// Visiting order over the circles: exhaustive enumeration up to 9 circles,
/// nearest-neighbor start plus 2-opt/Or-opt beyond. Equal-cost reversals are
/// broken by the realized plan length, which is direction sensitive.
inline Permutation compute_permutation(const TangentGraph& g, const Scenario& s) {
    const int n = g.circle_count;
    Permutation perm;
    if (n == 1) {
        perm.order = {0};
        return perm;
    }
    const auto cost = detail::atsp_costs(g);
    for (int j = 1; j < n; ++j) {
        if (!std::isfinite(cost[0][static_cast<size_t>(j)]) ||
            !std::isfinite(cost[static_cast<size_t>(j)][0])) {
            throw DisconnectedGraph("visiting circle unreachable from the base");
        }
    }
    if (n <= 9) {
        perm.order = detail::exhaustive_tour(cost, n);
    } else {
        perm.order = detail::nearest_neighbor_tour(cost, n);
        detail::improve_tour(cost, &perm.order);
    }

    if (n >= 3) {
        Permutation rev;
        rev.order.push_back(0);
        for (size_t i = perm.order.size(); i-- > 1;) rev.order.push_back(perm.order[i]);
        const double cf = detail::tour_cost(cost, perm.order);
        const double cr = detail::tour_cost(cost, rev.order);
        if (std::abs(cf - cr) <= 1e-9 * std::max(1.0, cf)) {
            try {
                const double lf = construct_for_permutation(s, g, perm).length;
                const double lr = construct_for_permutation(s, g, rev).length;
                if (lr < lf - 1e-12) perm = rev;
            } catch (const Error&) {
                // keep the forward order when either direction fails to build
            }
        }
    }
    return perm;
}

/// End-to-end planner: tangent graph, visiting order, blocking boundaries,
/// tree-like graph, shortest-path search.
inline SvppResult plan_svpp(const Scenario& s) {
    const TangentGraph g = build_tangent_graph(s);
    const Permutation perm = compute_permutation(g, s);
    return construct_robust(s, g, perm);
}

}  // namespace viaplan
