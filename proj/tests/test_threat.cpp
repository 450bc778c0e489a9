#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "viaplan/threat.hpp"
#include "viaplan/threat_io.hpp"
#include "viaplan/viability.hpp"

using namespace viaplan;

namespace {

ThreatScenario base_scenario() {
    ThreatScenario ts;
    ts.region.kind = RegionBoundary::Kind::Circle;
    ts.region.circle = {{0.0, 0.0}, 500.0};
    ts.robot = {1.5, 0.5};  // R_min = 3
    ts.start = Configuration({-100.0, 0.0}, 0.0);
    ts.goal = {100.0, 0.0};
    return ts;
}

double sampled_max_threat(const ViablePath& path, const ThreatScenario& ts) {
    double worst = 0.0;
    for (const auto& seg : path.segments) {
        const int steps = std::max(2, static_cast<int>(std::ceil(seg.length / 0.05)));
        for (int k = 0; k <= steps; ++k) {
            const Point q = seg.point_at(seg.length * k / steps);
            for (const auto& a : ts.agents) {
                worst = std::max(worst, a.level(distance(q, a.position)));
            }
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("type-2 critical point between unequal agents") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({{0.0, 0.0}, 1.0, nullptr});
    ts.agents.push_back({{2.0, 0.0}, 2.0, nullptr});
    const auto cps = compute_critical_points(ts);
    REQUIRE(cps.size() == 1);
    CHECK(cps[0].kind == CriticalPoint::Kind::Type2);
    CHECK(cps[0].location.x == Catch::Approx(2.0 / 3.0));
    CHECK(cps[0].location.y == Catch::Approx(0.0).margin(1e-12));
    CHECK(cps[0].level == Catch::Approx(1.0 / 3.0));
    // levels agree from both agents
    const double fi = ts.agents[0].level(distance(cps[0].location, ts.agents[0].position));
    const double fj = ts.agents[1].level(distance(cps[0].location, ts.agents[1].position));
    CHECK(std::abs(fi - fj) <= 1e-9);
}

TEST_CASE("identical agents meet in the middle") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({{0.0, 0.0}, 3.0, nullptr});
    ts.agents.push_back({{4.0, 0.0}, 3.0, nullptr});
    const auto cps = compute_critical_points(ts);
    REQUIRE(cps.size() == 1);
    CHECK(cps[0].location.x == Catch::Approx(2.0));
    CHECK(cps[0].level == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("type-1 critical point at the nearest boundary point") {
    ThreatScenario ts = base_scenario();
    ts.region.circle = {{0.0, 0.0}, 100.0};
    ts.start = Configuration({-60.0, 0.0}, 0.0);
    ts.goal = {60.0, 0.0};
    ts.agents.push_back({{0.0, 85.0}, 30.0, nullptr});
    const auto cps = compute_critical_points(ts);
    REQUIRE(cps.size() == 1);
    CHECK(cps[0].kind == CriticalPoint::Kind::Type1);
    CHECK(cps[0].location.x == Catch::Approx(0.0).margin(1e-9));
    CHECK(cps[0].location.y == Catch::Approx(100.0));
    CHECK(cps[0].level == Catch::Approx(0.5));
}

TEST_CASE("critical points come out sorted by level") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({{0.0, 450.0}, 60.0, nullptr});    // type 1, theta = 1 - 50/60
    ts.agents.push_back({{0.0, 420.0}, 40.0, nullptr});    // overlaps the first
    ts.agents.push_back({{200.0, 0.0}, 30.0, nullptr});
    ts.agents.push_back({{230.0, 0.0}, 30.0, nullptr});    // type 2 with the third
    const auto cps = compute_critical_points(ts);
    REQUIRE(cps.size() >= 2);
    for (size_t i = 1; i < cps.size(); ++i) {
        CHECK(cps[i].level >= cps[i - 1].level);
    }
}

TEST_CASE("shrunk radius closed form and general inversion") {
    ThreatAgent linear{{0.0, 0.0}, 12.0, nullptr};
    CHECK(shrunk_radius(linear, 0.3) == Catch::Approx(8.4));
    CHECK(shrunk_radius(linear, 0.0) == Catch::Approx(12.0));

    ThreatAgent curved{{0.0, 0.0}, 10.0, nullptr};
    curved.level_fn = [](double d) { const double t = 1.0 - d / 10.0; return t * t; };
    for (double theta : {0.05, 0.3, 0.77}) {
        const double r = shrunk_radius(curved, theta);
        CHECK(std::abs(curved.level(r) - theta) <= 1e-9);
    }

    ThreatAgent weak{{0.0, 0.0}, 10.0, nullptr};
    weak.level_fn = [](double d) { return 0.5 * (1.0 - d / 10.0); };
    CHECK_THROWS_AS(shrunk_radius(weak, 0.9), LevelAboveMax);
}

TEST_CASE("extreme graph matches an independent tangent enumeration") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({{0.0, 200.0}, 30.0, nullptr});
    const auto eg = build_extreme_graph(ts, 0.0);

    // Independent enumeration with the textbook angle construction: outer
    // tangency angles at phi +- acos((r1-r2)/D), inner at phi +- acos((r1+r2)/D),
    // point tangencies at phi +- acos(r/D). Same filters, different math.
    struct Seg {
        Point a, b;
    };
    std::vector<Circle> circles = eg.circles;
    std::vector<Seg> candidates;
    for (size_t i = 0; i < circles.size(); ++i) {
        for (size_t j = i + 1; j < circles.size(); ++j) {
            if (i == 0 && j == 1) continue;
            const Vec2 d = circles[j].center - circles[i].center;
            const double dist = d.norm();
            const double phi = angle_of(d);
            const double co = (circles[i].radius - circles[j].radius) / dist;
            for (double sgn : {1.0, -1.0}) {
                const double ang = phi + sgn * std::acos(co);
                candidates.push_back({circles[i].center + circles[i].radius * unit_from_angle(ang),
                                      circles[j].center + circles[j].radius * unit_from_angle(ang)});
            }
            const double ci = (circles[i].radius + circles[j].radius) / dist;
            if (ci < 1.0) {
                for (double sgn : {1.0, -1.0}) {
                    const double ang = phi + sgn * std::acos(ci);
                    candidates.push_back(
                        {circles[i].center + circles[i].radius * unit_from_angle(ang),
                         circles[j].center - circles[j].radius * unit_from_angle(ang)});
                }
            }
        }
    }
    const auto clear_of_circles = [&](Point a, Point b) {
        for (const auto& c : circles) {
            if (point_segment_distance(c.center, a, b) < c.radius - 1e-6) return false;
        }
        return true;
    };
    size_t goal_lines = 0;
    for (const auto& c : circles) {
        const Vec2 d = ts.goal - c.center;
        const double dist = d.norm();
        if (dist <= c.radius) continue;
        for (double sgn : {1.0, -1.0}) {
            const double ang = angle_of(d) + sgn * std::acos(c.radius / dist);
            const Point t = c.center + c.radius * unit_from_angle(ang);
            if (clear_of_circles(t, ts.goal)) ++goal_lines;
        }
    }
    size_t surviving = 0;
    for (const auto& s : candidates) {
        if (ts.region.contains(s.a, 1e-9) && ts.region.contains(s.b, 1e-9) &&
            clear_of_circles(s.a, s.b)) {
            ++surviving;
        }
    }
    CHECK(eg.tangent_line_count == surviving + goal_lines);
    CHECK(eg.goal_edges.size() == goal_lines);

    const auto counts = count_graph_elements(ts, 0.0);
    CHECK(counts.vertices == eg.vertices.size() + 1);
    CHECK(counts.critical_points == 0);
}

TEST_CASE("raising the level only adds feasible edges") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({{0.0, 30.0}, 40.0, nullptr});
    ts.agents.push_back({{0.0, -30.0}, 40.0, nullptr});
    const auto key_set = [](const ExtremeGraph& eg) {
        std::set<std::tuple<int, int, int, int>> keys;
        for (const auto& t : eg.tangent_edges) {
            const int c1 = eg.vertices[static_cast<size_t>(t.v_from)].circle;
            const int c2 = eg.vertices[static_cast<size_t>(t.v_to)].circle;
            keys.insert({c1, c2, t.from_dir == RotDir::CW, t.to_dir == RotDir::CW});
        }
        return keys;
    };
    const auto low = key_set(build_extreme_graph(ts, 0.05));
    const auto high = key_set(build_extreme_graph(ts, 0.6));
    for (const auto& k : low) {
        CHECK(high.count(k) == 1);
    }
}

TEST_CASE("an agent swallowing the start position cannot be planned around") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({ts.start.position, 50.0, nullptr});
    CHECK_THROWS_AS(plan_min_threat(ts), Error);
}

TEST_CASE("open field crossings run at level zero") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({{0.0, 120.0}, 30.0, nullptr});  // far off the direct line
    const auto plan = plan_min_threat(ts);
    CHECK(plan.best.theta == 0.0);
    CHECK(plan.level_index == -1);
    CHECK(sampled_max_threat(plan.best.path, ts) <= 1e-6);
}

TEST_CASE("a straight aligned crossing is the euclidean segment") {
    ThreatScenario ts = base_scenario();
    const auto plan = plan_min_threat(ts);
    CHECK(plan.best.theta == 0.0);
    CHECK(plan.best.length == Catch::Approx(200.0).margin(1e-6));
}

TEST_CASE("a corridor sealed by one agent opens exactly at the type-1 level") {
    ThreatScenario ts;
    ts.robot = {1.5, 0.5};  // R_min = 3
    ts.region.kind = RegionBoundary::Kind::Polygon;
    ts.region.polygon = {{-150.0, -20.0}, {150.0, -20.0}, {150.0, 20.0}, {-150.0, 20.0}};
    ts.start = Configuration({-100.0, 0.0}, 0.0);
    ts.goal = {100.0, 0.0};
    ts.agents.push_back({{0.0, 0.0}, 30.0, nullptr});

    const auto cps = compute_critical_points(ts);
    REQUIRE(cps.size() == 2);  // both walls pinch
    CHECK(cps[0].level == Catch::Approx(1.0 - 20.0 / 30.0));

    const auto plan = plan_min_threat(ts);
    CHECK(plan.best.theta == Catch::Approx(1.0 / 3.0));
    // below the achieved level the graph must be disconnected
    const auto eg0 = build_extreme_graph(ts, 0.0);
    CHECK_FALSE(shortest_viable_on_extreme_graph(eg0).has_value());
    CHECK(sampled_max_threat(plan.best.path, ts) <= plan.best.theta + 1e-6);

    // smoothness invariants carry over to threat paths
    ViabilityReport report;
    check_smoothness(plan.best.path, ts.r_min(), false, {}, &report);
    for (const auto& f : report.failures) INFO(f);
    CHECK(report.ok);
    // endpoints: start pose to goal
    CHECK(distance(plan.best.path.start(), ts.start.position) <= 1e-9);
    CHECK(distance(plan.best.path.end(), ts.goal) <= 1e-9);
}

TEST_CASE("two overlapping agents force a type-2 crossing") {
    ThreatScenario ts = base_scenario();
    // two overlapping disks sealing the region wall to wall
    ts.region.circle = {{0.0, 0.0}, 100.0};
    ts.start = Configuration({-60.0, 0.0}, 0.0);
    ts.goal = {60.0, 0.0};
    ts.agents.push_back({{0.0, 60.0}, 70.0, nullptr});
    ts.agents.push_back({{0.0, -60.0}, 70.0, nullptr});
    const auto plan = plan_min_threat(ts);
    CHECK(plan.best.theta > 0.0);
    CHECK(plan.level_index >= 0);
    // the achieved level is a member of the critical set
    bool member = false;
    for (const auto& cp : plan.critical_points) {
        if (cp.level == plan.best.theta) member = true;
    }
    CHECK(member);
    // every strictly smaller critical level stays disconnected
    for (const auto& cp : plan.critical_points) {
        if (cp.level < plan.best.theta) {
            const auto eg = build_extreme_graph(ts, cp.level);
            CHECK_FALSE(shortest_viable_on_extreme_graph(eg).has_value());
        }
    }
    CHECK(sampled_max_threat(plan.best.path, ts) <= plan.best.theta + 1e-6);

    ViabilityReport report;
    check_smoothness(plan.best.path, ts.r_min(), false, {}, &report);
    CHECK(report.ok);
}

TEST_CASE("counts respect the quadratic bounds for two agents") {
    ThreatScenario ts = base_scenario();
    ts.region.circle = {{0.0, 0.0}, 100.0};
    ts.start = Configuration({-60.0, 0.0}, 0.0);
    ts.goal = {60.0, 0.0};
    ts.agents.push_back({{0.0, 80.0}, 25.0, nullptr});
    ts.agents.push_back({{30.0, 80.0}, 25.0, nullptr});
    const auto counts = count_graph_elements(ts, 0.0);
    CHECK(counts.critical_points == 3);  // two boundary contacts plus one pair
    CHECK(counts.vertices <= 54);
    CHECK(counts.edges <= 78);
    const size_t n = ts.agents.size();
    CHECK(counts.critical_points <= n * (n + 1) / 2);
    CHECK(counts.tangent_lines <= 2 * n * n + 8 * n);
}

TEST_CASE("an agent far from everything has no critical points") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({{0.0, 200.0}, 30.0, nullptr});
    CHECK(compute_critical_points(ts).empty());
}

TEST_CASE("threat scenario json round trip") {
    ThreatScenario ts = base_scenario();
    ts.agents.push_back({{10.0, 50.0}, 25.0, nullptr});
    const auto j = threat_scenario_to_json(ts);
    const ThreatScenario back = threat_scenario_from_json(j);
    CHECK(back.agents.size() == 1);
    CHECK(back.agents[0].radius == Catch::Approx(25.0));
    CHECK(back.region.circle.radius == Catch::Approx(500.0));
    CHECK(back.start.heading == Catch::Approx(ts.start.heading));
    CHECK(threat_scenario_to_json(back).dump() == j.dump());
}

TEST_CASE("validation flags assumption violations") {
    ThreatScenario ts = base_scenario();
    ts.goal = ts.start.position + Point{10.0, 0.0};  // closer than 8 R_min
    ts.agents.push_back({{0.0, 0.0}, 1.0, nullptr});  // radius below R_min
    const auto v = validate_threat(ts);
    bool goal_sep = false, radius = false;
    for (const auto& violation : v) {
        if (violation.kind == "start-goal-separation") goal_sep = true;
        if (violation.kind.rfind("agent-radius", 0) == 0) radius = true;
    }
    CHECK(goal_sep);
    CHECK(radius);
}

TEST_CASE("search length equals an exhaustive relaxation oracle") {
    // Bellman-Ford over the same rotation-expanded states; no priority queue,
    // no early exit, so it exercises an independent search strategy.
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> px(-50.0, 50.0), py(-90.0, 90.0), pr(8.0, 25.0);
    int compared = 0;
    while (compared < 20) {
        ThreatScenario ts = base_scenario();
        ts.region.circle = {{0.0, 0.0}, 120.0};
        ts.start = Configuration({-80.0, 0.0}, 0.0);
        ts.goal = {80.0, 0.0};
        const int n = 1 + static_cast<int>(rng() % 4);
        for (int i = 0; i < n; ++i) {
            ThreatAgent a{{px(rng), py(rng)}, pr(rng), nullptr};
            if (distance(a.position, ts.start.position) <= 24.0 + a.radius + 2.0) continue;
            if (distance(a.position, ts.goal) <= a.radius + 2.0) continue;
            ts.agents.push_back(a);
        }
        ThreatPlan plan;
        try {
            plan = plan_min_threat(ts);
        } catch (const Error&) {
            continue;
        }
        const ExtremeGraph eg = build_extreme_graph(ts, plan.best.theta);
        if (eg.vertices.size() > 200) continue;

        const size_t nstates = 2 * eg.vertices.size();
        const auto state_of = [](int v, RotDir d) {
            return static_cast<size_t>(2 * v + (d == RotDir::CW ? 1 : 0));
        };
        std::vector<double> dist(nstates, std::numeric_limits<double>::infinity());
        dist[state_of(eg.p0_left, eg.start_dir_left)] = 0.0;
        dist[state_of(eg.p0_right, eg.start_dir_right)] = 0.0;
        for (size_t round = 0; round <= nstates; ++round) {
            bool changed = false;
            for (const auto& a : eg.arc_edges) {
                const size_t u = state_of(a.v_from, a.dir);
                const size_t v = state_of(a.v_to, a.dir);
                if (std::isfinite(dist[u]) && dist[u] + a.length < dist[v] - 1e-15) {
                    dist[v] = dist[u] + a.length;
                    changed = true;
                }
            }
            for (const auto& t : eg.tangent_edges) {
                const size_t u = state_of(t.v_from, t.from_dir);
                const size_t v = state_of(t.v_to, t.to_dir);
                if (std::isfinite(dist[u]) && dist[u] + t.length < dist[v] - 1e-15) {
                    dist[v] = dist[u] + t.length;
                    changed = true;
                }
            }
            if (!changed) break;
        }
        double oracle = std::numeric_limits<double>::infinity();
        for (const auto& ge : eg.goal_edges) {
            oracle = std::min(oracle, dist[state_of(ge.v_from, ge.from_dir)] + ge.length);
        }
        REQUIRE(std::isfinite(oracle));
        CHECK(plan.best.length == Catch::Approx(oracle).epsilon(1e-12));
        ++compared;
    }
}

TEST_CASE("clockwise region polygons are normalized on load") {
    nlohmann::json j;
    j["region"] = {{"polygon", {{-150.0, -20.0}, {-150.0, 20.0}, {150.0, 20.0}, {150.0, -20.0}}}};
    j["agents"] = nlohmann::json::array();
    j["start"] = {{"x", -100.0}, {"y", 0.0}, {"theta", 0.0}};
    j["goal"] = {{"x", 100.0}, {"y", 0.0}};
    j["robot"] = {{"v", 1.5}, {"u_M", 0.5}};
    const ThreatScenario ts = threat_scenario_from_json(j);
    CHECK(ts.region.contains({0.0, 0.0}, 0.0));
    CHECK_FALSE(ts.region.contains({0.0, 30.0}, 0.0));
}

TEST_CASE("planning works end to end with a non-linear level profile") {
    ThreatScenario ts;
    ts.robot = {1.5, 0.5};
    ts.region.kind = RegionBoundary::Kind::Circle;
    ts.region.circle = {{0.0, 0.0}, 100.0};
    ts.start = Configuration({-60.0, 0.0}, 0.0);
    ts.goal = {60.0, 0.0};
    // wall-to-wall pair with quadratic ramps: every inversion runs by bisection
    for (double y : {60.0, -60.0}) {
        ThreatAgent a{{0.0, y}, 70.0, nullptr};
        a.level_fn = [](double d) { const double t = 1.0 - d / 70.0; return t * t; };
        ts.agents.push_back(a);
    }
    const auto plan = plan_min_threat(ts);
    CHECK(plan.best.theta > 0.0);
    bool member = false;
    for (const auto& cp : plan.critical_points) {
        if (cp.level == plan.best.theta) member = true;
    }
    CHECK(member);
    // the crossing pinch sits midway between the identical agents
    const auto cps = compute_critical_points(ts);
    bool has_mid = false;
    for (const auto& cp : cps) {
        if (cp.kind == CriticalPoint::Kind::Type2 &&
            distance(cp.location, {0.0, 0.0}) < 1e-6) {
            has_mid = true;
        }
    }
    CHECK(has_mid);
}

TEST_CASE("oblique start headings are honored exactly") {
    ThreatScenario ts = base_scenario();
    ts.start = Configuration({-100.0, -20.0}, kPi / 3.0);
    ts.goal = {90.0, 40.0};
    ts.agents.push_back({{0.0, 10.0}, 25.0, nullptr});
    const auto plan = plan_min_threat(ts);
    REQUIRE_FALSE(plan.best.path.segments.empty());
    CHECK(angle_distance(plan.best.path.segments.front().start_heading(), kPi / 3.0) <= 1e-9);
    CHECK(distance(plan.best.path.start(), ts.start.position) <= 1e-9);
    CHECK(distance(plan.best.path.end(), ts.goal) <= 1e-9);
    ViabilityReport rep;
    check_smoothness(plan.best.path, ts.r_min(), false, {}, &rep);
    CHECK(rep.ok);
}
