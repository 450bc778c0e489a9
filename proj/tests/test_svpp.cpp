#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

#include "helpers.hpp"
#include "viaplan/instance_gen.hpp"
#include "viaplan/svpp.hpp"
#include "viaplan/viability.hpp"

using namespace viaplan;
using testutil::make_scenario;

namespace {

// Independent permutation oracle: enumerate every tour over the same directed
// cost matrix and return the minimum cost.
double enumerated_min_tour_cost(const std::vector<std::vector<double>>& cost, int n) {
    std::vector<int> rest;
    for (int i = 1; i < n; ++i) rest.push_back(i);
    double best = std::numeric_limits<double>::infinity();
    do {
        std::vector<int> order = {0};
        order.insert(order.end(), rest.begin(), rest.end());
        best = std::min(best, detail::tour_cost(cost, order));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

Permutation reversed(const Permutation& p) {
    Permutation r;
    r.order.push_back(p.order.front());
    for (size_t i = p.order.size(); i-- > 1;) r.order.push_back(p.order[i]);
    return r;
}

}  // namespace

TEST_CASE("two circles have the unique tour") {
    const auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}});
    const auto g = build_tangent_graph(s);
    const auto perm = compute_permutation(g, s);
    REQUIRE(perm.order.size() == 2);
    CHECK(perm.order[0] == 0);
    CHECK(perm.order[1] == 1);
}

TEST_CASE("solver matches exhaustive tour enumeration at small sizes") {
    const auto s = make_scenario(
        {{0.0, 0.0}, {40.0, 5.0}, {15.0, 35.0}, {55.0, 30.0}, {30.0, -25.0}}, 3.0, 1.0, 2.0e6);
    const auto g = build_tangent_graph(s);
    const auto cost = detail::atsp_costs(g);
    const auto perm = compute_permutation(g, s);
    CHECK(detail::tour_cost(cost, perm.order) ==
          Catch::Approx(enumerated_min_tour_cost(cost, g.circle_count)).epsilon(1e-12));
}

TEST_CASE("obstacle-free scenes keep the permutation unchanged") {
    const auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}, {20.0, 30.0}});
    const auto g = build_tangent_graph(s);
    const auto perm = compute_permutation(g, s);
    const auto [ext, simplified] = extend_permutation(perm, g);
    CHECK(ext.blocking_count == 0);
    CHECK(ext.order == perm.order);
    CHECK(simplified.hop_tangents.size() == perm.order.size());
}

TEST_CASE("a blocking obstacle is inserted into the permutation") {
    // Base, then two nodes with a grown box squarely between them: the pair
    // (node2, node3) has no direct tangents, so the boundary joins the order.
    // The return leg to the base stays clear.
    auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}, {40.0, -40.0}});
    testutil::add_box_obstacle(&s, {36.0, -24.0}, {44.0, -16.0}, 4.0);
    const auto g = build_tangent_graph(s);
    const auto perm = compute_permutation(g, s);
    const auto [ext, simplified] = extend_permutation(perm, g);
    CHECK(ext.blocking_count == 1);
    CHECK(ext.order.size() == 4);  // n' = n + K
    // the inserted element is the obstacle hull
    bool has_hull = false;
    for (int e : ext.order) {
        if (g.elements[static_cast<size_t>(e)].kind == Element::Kind::ObstacleHull) has_hull = true;
    }
    CHECK(has_hull);

    const auto tree = build_tree(g, simplified, ext, s.initial_config);
    const auto enumeration = enumerate_tree_paths(g, tree);
    CHECK(enumeration.viable_paths == 8);  // 2^(n'-1)

    const auto dp = shortest_path_dp(g, tree);
    CHECK(dp.length == Catch::Approx(enumeration.min_length).epsilon(1e-12));

    const auto report = check_viability(dp.path, s);
    for (const auto& f : report.failures) INFO(f);
    CHECK(report.ok);
}

TEST_CASE("one obstacle can block two pairs, counting twice") {
    // A tall wall crossed by both horizontal legs of the rectangle tour.
    auto s = make_scenario({{0.0, 0.0}, {70.0, 0.0}, {70.0, 44.0}, {0.0, 44.0}});
    testutil::add_box_obstacle(&s, {31.0, -12.0}, {39.0, 56.0}, 4.0);
    const auto g = build_tangent_graph(s);
    const auto perm = compute_permutation(g, s);
    const auto [ext, simplified] = extend_permutation(perm, g);
    CHECK(ext.blocking_count == 2);
    CHECK(ext.order.size() == perm.order.size() + 2);
    int hull_occurrences = 0;
    for (int e : ext.order) {
        if (g.elements[static_cast<size_t>(e)].kind == Element::Kind::ObstacleHull)
            ++hull_occurrences;
    }
    CHECK(hull_occurrences == 2);  // one physical obstacle, two insertions

    const auto tree = build_tree(g, simplified, ext, s.initial_config);
    const auto dp = shortest_path_dp(g, tree);
    const auto enumeration = enumerate_tree_paths(g, tree);
    CHECK(enumeration.viable_paths == (1ull << (ext.order.size() - 1)));
    CHECK(dp.length == Catch::Approx(enumeration.min_length).epsilon(1e-12));
    const auto report = check_viability(dp.path, s);
    for (const auto& f : report.failures) INFO(f);
    CHECK(report.ok);
}

TEST_CASE("path count law holds for growing tours") {
    const std::vector<std::vector<Point>> layouts = {
        {{0.0, 0.0}, {40.0, 0.0}},
        {{0.0, 0.0}, {40.0, 0.0}, {20.0, 30.0}},
        {{0.0, 0.0}, {40.0, 0.0}, {40.0, 40.0}, {0.0, 40.0}},
        {{0.0, 0.0}, {40.0, 0.0}, {55.0, 35.0}, {20.0, 55.0}, {-15.0, 30.0}},
    };
    for (const auto& pts : layouts) {
        const auto s = make_scenario(pts);
        const auto g = build_tangent_graph(s);
        const auto perm = compute_permutation(g, s);
        const auto [ext, simplified] = extend_permutation(perm, g);
        const auto tree = build_tree(g, simplified, ext, s.initial_config);
        REQUIRE(tree.full_tangent_sets);
        const auto enumeration = enumerate_tree_paths(g, tree);
        CHECK(enumeration.viable_paths == (1ull << (ext.order.size() - 1)));
        const auto dp = shortest_path_dp(g, tree);
        CHECK(dp.length == Catch::Approx(enumeration.min_length).epsilon(1e-12));
    }
}

TEST_CASE("a single-circle tour is the adjusted full circle") {
    auto s = make_scenario({{0.0, 0.0}});
    s.nodes[0].data_load_bits = 50.0 / 3.0 * rate_at(s.radio, 3.0);  // l = 50 m, R_min = 3
    const auto result = plan_svpp(s);
    // one full turn is ~18.85 m; covering 50 m takes floor(50/18.85)+1 = 3 turns
    CHECK(result.n_prime == 1);
    CHECK(result.length == Catch::Approx(3.0 * kTwoPi * 3.0));
    CHECK(result.path.segments.size() == 1);
}

TEST_CASE("zero data loads leave every arc unadjusted") {
    const auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}, {20.0, 30.0}});
    const auto result = plan_svpp(s);
    for (const auto& seg : result.path.segments) {
        CHECK(seg.extra_turns == 0);
    }
    const auto report = check_viability(result.path, s);
    CHECK(report.ok);
}

TEST_CASE("larger loads never shorten the path under a fixed permutation") {
    const std::vector<Point> pts = {{0.0, 0.0}, {40.0, 0.0}, {20.0, 30.0}, {-20.0, 25.0}};
    std::vector<double> lengths;
    for (double g_bits : {0.0, 1.0e6, 4.0e6, 1.6e7, 6.4e7}) {
        auto s = make_scenario(pts, 3.0, 1.0, g_bits);
        const auto graph = build_tangent_graph(s);
        Permutation perm;
        perm.order = {0, 1, 2, 3};
        lengths.push_back(construct_for_permutation(s, graph, perm).length);
    }
    for (size_t i = 1; i < lengths.size(); ++i) {
        CHECK(lengths[i] >= lengths[i - 1] - 1e-9);
    }
}

TEST_CASE("the planner never returns a tour worse than its reverse") {
    auto s = make_scenario({{0.0, 0.0}, {40.0, 8.0}, {12.0, 36.0}, {-25.0, 20.0}}, 3.0, 1.0, 0.0);
    s.nodes[1].data_load_bits = 6.0e6;
    s.nodes[3].data_load_bits = 1.0e6;
    const auto g = build_tangent_graph(s);
    const auto result = plan_svpp(s);
    const double forward = result.length;
    const double backward = construct_for_permutation(s, g, reversed(result.permutation)).length;
    CHECK(forward <= backward + 1e-9);
}

TEST_CASE("an initial configuration off the base circle is rejected") {
    auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}});
    const auto g = build_tangent_graph(s);
    const auto perm = compute_permutation(g, s);
    const auto [ext, simplified] = extend_permutation(perm, g);
    CHECK_THROWS_AS(build_tree(g, simplified, ext, Configuration({10.0, 10.0}, 0.0)),
                    InitialConfigOffCircle);
    // on the circle but heading not tangent
    CHECK_THROWS_AS(build_tree(g, simplified, ext, Configuration({3.0, 0.0}, 0.3)),
                    InitialConfigOffCircle);
}

TEST_CASE("a graph with no usable tangents reports the failure") {
    const auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}});
    auto g = build_tangent_graph(s);
    g.tangents.clear();  // simulate total blockage
    Permutation perm;
    perm.order = {0, 1};
    CHECK_THROWS_AS(extend_permutation(perm, g), NoDetourExists);
    CHECK_THROWS_AS(compute_permutation(g, s), DisconnectedGraph);
}

TEST_CASE("full plan on a cluttered scene passes the viability oracle") {
    auto s = make_scenario({{0.0, 0.0},
                            {52.0, 6.0},
                            {95.0, 30.0},
                            {60.0, 70.0},
                            {10.0, 80.0},
                            {-35.0, 45.0},
                            {30.0, 38.0}},
                           3.0, 1.0, 3.0e6);
    testutil::add_box_obstacle(&s, {25.0, 12.0}, {34.0, 21.0}, 4.0);
    testutil::add_box_obstacle(&s, {66.0, 44.0}, {76.0, 54.0}, 4.0);
    REQUIRE(validate(s).empty());
    const auto result = plan_svpp(s);
    const auto report = check_viability(result.path, s);
    for (const auto& f : report.failures) INFO(f);
    CHECK(report.ok);
    CHECK(result.length > 0.0);
    CHECK(result.path.total_length == Catch::Approx(result.length).epsilon(1e-9));
}

TEST_CASE("ten-node fields at full speed land in the expected length range") {
    // 200 m x 200 m field, v = 6 m/s: whole tours run to a few hundred meters.
    GenSpec spec;
    spec.n_nodes = 10;
    spec.n_obstacles = 2;
    spec.d_safe = 7.0;  // stay above R_min = 6
    spec.robot = {6.0, 1.0};
    spec.seed = 4242;
    const Scenario s = generate(spec);
    const auto result = plan_svpp(s);
    CHECK(result.length > 200.0);
    CHECK(result.length < 2000.0);
    CHECK(check_viability(result.path, s).ok);
}

TEST_CASE("a pair stranded on one rotation sense detours around the blocker") {
    // The middle circle blocks three of the four tangents between the outer
    // pair; the lone survivor arrives counterclockwise, which can never close
    // a two-circle tour that starts clockwise. The planner must route the
    // detour around the blocking circle instead.
    const auto s = make_scenario({{0.0, 0.0}, {20.0, 2.0}, {40.0, 0.0}});
    const auto g = build_tangent_graph(s);
    REQUIRE(g.tangents_between(0, 2).size() == 1);

    Permutation two;
    two.order = {0, 2};
    CHECK_THROWS_AS(construct_for_permutation(s, g, two), DisconnectedGraph);

    const SvppResult r = construct_robust(s, g, two);
    CHECK(r.length > 0.0);
    // the blocking circle appears in the extended order as a non-stop detour
    bool detour = false;
    for (size_t i = 0; i < r.extended.order.size(); ++i) {
        if (r.extended.order[i] == 1 && !r.extended.is_stop[i]) detour = true;
    }
    CHECK(detour);
    CHECK(r.circle_arrival_lengths.size() == 2);  // arrivals only at true stops

    Scenario masked = s;
    masked.nodes[1].data_load_bits = 0.0;
    const auto report = check_viability(r.path, masked);
    for (const auto& f : report.failures) INFO(f);
    CHECK(report.ok);
}

TEST_CASE("counterclockwise start poses plan just as well") {
    auto s = make_scenario({{0.0, 0.0}, {40.0, 6.0}, {14.0, 33.0}}, 3.0, 1.0, 1.0e6);
    // north heading at the east point of the base circle: counterclockwise
    s.initial_config = Configuration({3.0, 0.0}, kPi / 2.0);
    const auto result = plan_svpp(s);
    const auto report = check_viability(result.path, s);
    for (const auto& f : report.failures) INFO(f);
    CHECK(report.ok);
    // the tour leaves the start with the requested heading
    CHECK(angle_distance(result.path.segments.front().start_heading(), kPi / 2.0) <= 1e-9);
}
