#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "viaplan/ksvpp.hpp"
#include "viaplan/viability.hpp"

using namespace viaplan;
using testutil::make_scenario;

namespace {

Scenario eight_node_scene(double g_bits = 1.0e6) {
    return make_scenario({{0.0, 0.0},
                          {45.0, 10.0},
                          {85.0, 35.0},
                          {70.0, 75.0},
                          {30.0, 90.0},
                          {-15.0, 70.0},
                          {-40.0, 30.0},
                          {25.0, 45.0}},
                         3.0, 1.0, g_bits);
}

}  // namespace

TEST_CASE("split threshold formula") {
    CHECK(split_threshold(1, 2, 100.0, 10.0) == Catch::Approx(50.0));
    CHECK(split_threshold(2, 3, 120.0, 15.0) == Catch::Approx(75.0));
}

TEST_CASE("k equal to one keeps the whole tour") {
    const auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}, {20.0, 30.0}});
    const auto g = build_tangent_graph(s);
    const auto whole = construct_for_permutation(s, g, compute_permutation(g, s));
    const auto clusters = split_tour(s, g, whole, 1);
    REQUIRE(clusters.size() == 1);
    CHECK(clusters[0] == whole.permutation.order);

    const KPlan kp = plan_ksvpp(s, 1);
    CHECK(kp.k_length == Catch::Approx(whole.length));
}

TEST_CASE("k larger than n-1 is rejected") {
    const auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}, {20.0, 30.0}});
    const auto g = build_tangent_graph(s);
    const auto whole = construct_for_permutation(s, g, compute_permutation(g, s));
    CHECK_THROWS_AS(split_tour(s, g, whole, 3), KTooLarge);
    CHECK_THROWS_AS(split_tour(s, g, whole, 0), KTooLarge);
}

TEST_CASE("clusters partition the circles and share only the base") {
    const auto s = eight_node_scene();
    const auto g = build_tangent_graph(s);
    const auto whole = construct_for_permutation(s, g, compute_permutation(g, s));
    for (int k : {2, 3, 4}) {
        const auto clusters = split_tour(s, g, whole, k);
        REQUIRE(static_cast<int>(clusters.size()) == k);
        std::multiset<int> seen;
        for (const auto& cluster : clusters) {
            REQUIRE_FALSE(cluster.empty());
            CHECK(cluster.front() == 0);  // the base leads every cluster
            for (size_t i = 1; i < cluster.size(); ++i) seen.insert(cluster[i]);
        }
        // every non-base circle in exactly one cluster
        CHECK(seen.size() == s.nodes.size() - 1);
        CHECK(std::set<int>(seen.begin(), seen.end()).size() == seen.size());
    }
}

TEST_CASE("improved planner never loses to the split baseline") {
    const auto s = eight_node_scene(2.0e6);
    const auto g = build_tangent_graph(s);
    const auto whole = construct_for_permutation(s, g, compute_permutation(g, s));
    for (int k : {2, 3}) {
        const KPlan base = plan_viable_ksplitour(s, g, whole, k);
        const KPlan better = plan_ksvpp(s, g, whole, k);
        REQUIRE(base.paths.size() == static_cast<size_t>(k));
        REQUIRE(better.paths.size() == static_cast<size_t>(k));
        CHECK(better.k_length <= base.k_length + 1e-9);
        for (int l = 0; l < k; ++l) {
            CHECK(better.lengths[static_cast<size_t>(l)] <=
                  base.lengths[static_cast<size_t>(l)] + 1e-9);
        }
    }
}

TEST_CASE("every per-vehicle path is viable") {
    auto s = eight_node_scene(1.0e6);
    testutil::add_box_obstacle(&s, {50.0, 48.0}, {58.0, 58.0}, 4.0);
    REQUIRE(validate(s).empty());
    const auto g = build_tangent_graph(s);
    const auto whole = construct_for_permutation(s, g, compute_permutation(g, s));
    const KPlan kp = plan_ksvpp(s, g, whole, 3);

    // Per-path viability: a vehicle only needs contact on its own cluster's
    // nodes, so evaluate contact against a scenario whose other nodes carry
    // zero load.
    for (size_t l = 0; l < kp.paths.size(); ++l) {
        Scenario sub = s;
        for (auto& node : sub.nodes) node.data_load_bits = 0.0;
        for (int elem : kp.clusters[l]) {
            sub.nodes[static_cast<size_t>(elem)].data_load_bits =
                s.nodes[static_cast<size_t>(elem)].data_load_bits;
        }
        const auto report = check_viability(kp.paths[l], sub);
        for (const auto& f : report.failures) INFO(f);
        CHECK(report.ok);
    }
}

TEST_CASE("contact coverage across vehicles touches every node exactly once") {
    const auto s = eight_node_scene(1.0e6);
    const KPlan kp = plan_ksvpp(s, 3);
    std::vector<int> covered(s.nodes.size(), 0);
    for (size_t l = 0; l < kp.paths.size(); ++l) {
        const auto& contact = kp.paths[l].contact_length_by_node;
        for (size_t i = 1; i < s.nodes.size(); ++i) {
            if (i < contact.size() && contact[i] > 0.0) covered[i] += 1;
        }
    }
    for (size_t i = 1; i < s.nodes.size(); ++i) {
        CHECK(covered[i] == 1);
    }
}

TEST_CASE("a degenerate base-only cluster rides the adjusted base circle") {
    auto s = make_scenario({{0.0, 0.0}, {40.0, 0.0}, {20.0, 30.0}});
    s.nodes[0].data_load_bits = 20.0 / 3.0 * rate_at(s.radio, 3.0);  // base needs 20 m of contact
    const auto g = build_tangent_graph(s);
    const auto [path, len] = detail::cluster_path_fixed_order(s, g, {0});
    // one full turn is ~18.85 m, so the ride is two turns
    CHECK(len == Catch::Approx(2.0 * kTwoPi * 3.0));
    REQUIRE(path.segments.size() == 1);
    CHECK(path.segments[0].kind == PathSegment::Kind::Arc);
}
