#include <doctest.h>

#include "impactpath/pathway.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <set>

using namespace impactpath;

namespace {

const Date kBase = Date::from_ymd(1991, 6, 1);

ImpactRecord record(const std::string& variable, const std::string& region, Index start, Index end,
                    Scalar score) {
    ImpactRecord rec;
    rec.variable = variable;
    rec.region = region;
    rec.interval = FeatureInterval{start, end, kBase + static_cast<std::int32_t>(start - 1),
                                   kBase + static_cast<std::int32_t>(end - 1)};
    rec.score = score;
    rec.mean_diff = score;
    rec.se = 1.0;
    rec.ci_level = 0.99;
    rec.ensemble_size = 9;
    return rec;
}

bool has_edge(const PathwayGraph& g, const std::string& from_var, const std::string& to_var) {
    for (const auto& [a, b] : g.edges)
        if (g.nodes[a].variable == from_var && g.nodes[b].variable == to_var) return true;
    return false;
}

int node_index(const PathwayGraph& g, const std::string& variable, Index start) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        if (g.nodes[i].variable == variable && g.nodes[i].interval.start_index == start)
            return static_cast<int>(i);
    REQUIRE(false);
    return -1;
}

// Re-derives edge admissibility straight from the documented rules.
bool edge_admissible(const ImpactRecord& a, const ImpactRecord& b, const PathwayConstraints& c) {
    const std::int32_t slack_end = a.interval.end_date.serial() + c.slack_days;
    return b.interval.start_date.serial() >= a.interval.start_date.serial() &&
           b.interval.start_date.serial() <= slack_end && c.regions_adjacent(a.region, b.region) &&
           c.variable_edge(a.variable, b.variable) && canonical_less(a, b, c);
}

std::vector<ImpactRecord> random_records(oracle::Rng& rng, const PathwayConstraints& c, int count) {
    std::vector<ImpactRecord> recs;
    for (int i = 0; i < count; ++i) {
        const auto& var = c.variables[static_cast<std::size_t>(rng.next_u64() % c.variables.size())];
        const auto& reg = c.regions[static_cast<std::size_t>(rng.next_u64() % c.regions.size())];
        const Index start = 1 + static_cast<Index>(rng.next_u64() % 300);
        const Index end = start + 5 + static_cast<Index>(rng.next_u64() % 120);
        const Scalar score = 4.0 * rng.normal();
        recs.push_back(record(var, reg, start, end, score));
    }
    return recs;
}

}  // namespace

TEST_CASE("default constraints describe the surface-cooling pathway") {
    const auto c = default_constraints();
    c.validate();
    CHECK(c.variables == std::vector<std::string>{"AEROD_v", "FSDSC", "TREFHT"});
    CHECK(c.variable_edge("AEROD_v", "AEROD_v"));
    CHECK(c.variable_edge("AEROD_v", "FSDSC"));
    CHECK(c.variable_edge("FSDSC", "TREFHT"));
    CHECK_FALSE(c.variable_edge("TREFHT", "FSDSC"));
    CHECK_FALSE(c.variable_edge("AEROD_v", "TREFHT"));
    CHECK(c.regions.size() == 7);
    CHECK(c.regions.front() == "Polar South");
    CHECK(c.regions.back() == "Polar North");
    CHECK(c.regions_adjacent("Tropical", "Tropical"));
    CHECK(c.regions_adjacent("Tropical", "Subtropical North"));
    CHECK(c.regions_adjacent("Subtropical North", "Tropical"));
    CHECK_FALSE(c.regions_adjacent("Polar South", "Polar North"));
    CHECK(c.epsilon == 1.0);
}

TEST_CASE("constraint validation rejects inconsistent inputs") {
    auto c = default_constraints();
    c.variable_deps.insert({"TREFHT", "AEROD_v"});  // points up the rank order
    CHECK_THROWS_AS(c.validate(), ConfigError);

    auto c2 = default_constraints();
    c2.region_adjacency.erase({"Tropical", "Subtropical North"});  // now asymmetric
    CHECK_THROWS_AS(c2.validate(), ConfigError);
}

TEST_CASE("build_full_dag three-record hand fixture") {
    const auto c = default_constraints();
    const std::vector<ImpactRecord> recs{
        record("AEROD_v", "Tropical", 1, 10, 5.0),
        record("FSDSC", "Tropical", 5, 20, -5.0),
        record("TREFHT", "Tropical", 15, 30, -5.0),
    };
    const auto g = build_full_dag(recs, c);
    REQUIRE(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(has_edge(g, "AEROD_v", "FSDSC"));
    CHECK(has_edge(g, "FSDSC", "TREFHT"));
    // AEROD_v -> TREFHT fails the variable rule; TREFHT starts after
    // AEROD_v ends anyway.
    CHECK_FALSE(has_edge(g, "AEROD_v", "TREFHT"));
}

TEST_CASE("build_full_dag thresholds nodes on |score| > epsilon") {
    const auto c = default_constraints();
    const std::vector<ImpactRecord> recs{
        record("AEROD_v", "Tropical", 1, 10, 0.5),
        record("FSDSC", "Tropical", 5, 20, -1.0),  // exactly epsilon: excluded
        record("TREFHT", "Tropical", 15, 30, -1.01),
    };
    const auto g = build_full_dag(recs, c);
    CHECK(g.node_count() == 1);
    CHECK(g.nodes[0].variable == "TREFHT");
    CHECK(g.edges.empty());

    CHECK(build_full_dag({}, c).node_count() == 0);
}

TEST_CASE("build_full_dag enforces region adjacency and temporal contact") {
    const auto c = default_constraints();
    SUBCASE("non-adjacent regions") {
        const auto g = build_full_dag(
            {record("AEROD_v", "Polar South", 1, 50, 5.0), record("FSDSC", "Tropical", 10, 60, 5.0)},
            c);
        CHECK(g.edge_count() == 0);
    }
    SUBCASE("gap between intervals") {
        const auto g = build_full_dag(
            {record("AEROD_v", "Tropical", 1, 10, 5.0), record("FSDSC", "Tropical", 11, 30, 5.0)}, c);
        CHECK(g.edge_count() == 0);
    }
    SUBCASE("slack bridges the gap") {
        auto cs = c;
        cs.slack_days = 1;
        const auto g = build_full_dag(
            {record("AEROD_v", "Tropical", 1, 10, 5.0), record("FSDSC", "Tropical", 11, 30, 5.0)},
            cs);
        CHECK(g.edge_count() == 1);
    }
    SUBCASE("abutment at the end day counts as contact") {
        const auto g = build_full_dag(
            {record("AEROD_v", "Tropical", 1, 10, 5.0), record("FSDSC", "Tropical", 10, 30, 5.0)}, c);
        CHECK(g.edge_count() == 1);
    }
}

TEST_CASE("impact_dag keeps the final node and its ancestor closure") {
    const auto c = default_constraints();
    // Chain a->b->c with side branch d->c and an unrelated node e.
    const std::vector<ImpactRecord> recs{
        record("AEROD_v", "Tropical", 1, 40, 5.0),             // a
        record("FSDSC", "Tropical", 20, 80, -5.0),             // b
        record("TREFHT", "Tropical", 60, 120, -5.0),           // c
        record("FSDSC", "Subtropical North", 30, 70, 3.0),     // d
        record("AEROD_v", "Polar North", 200, 240, 9.0),       // e
    };
    const auto full = build_full_dag(recs, c);
    REQUIRE(full.node_count() == 5);
    const auto final_node = find_node(full, {"TREFHT", "Tropical", kBase + 70});
    REQUIRE(final_node.has_value());
    const auto impact = impact_dag(full, *final_node);
    CHECK(impact.kind == GraphKind::Impact);
    CHECK(impact.node_count() == 4);
    for (const auto& n : impact.nodes) CHECK(n.interval.start_index != 200);
    CHECK(has_edge(impact, "AEROD_v", "FSDSC"));
    CHECK(has_edge(impact, "FSDSC", "TREFHT"));
}

TEST_CASE("impact_dag on a node with no incoming edges is a single node") {
    const auto c = default_constraints();
    const auto full = build_full_dag({record("AEROD_v", "Tropical", 1, 40, 5.0)}, c);
    const auto impact = impact_dag(full, 0);
    CHECK(impact.node_count() == 1);
    CHECK(impact.edge_count() == 0);
}

TEST_CASE("source_impact_path follows a single chain") {
    const auto c = default_constraints();
    const auto full = build_full_dag({record("AEROD_v", "Tropical", 1, 40, 5.0),
                                      record("FSDSC", "Tropical", 20, 80, -5.0),
                                      record("TREFHT", "Tropical", 60, 120, -5.0)},
                                     c);
    const auto path = source_impact_path(full, node_index(full, "AEROD_v", 1),
                                         node_index(full, "TREFHT", 60));
    REQUIRE(path.size() == 3);
    CHECK(full.nodes[static_cast<std::size_t>(path[0])].variable == "AEROD_v");
    CHECK(full.nodes[static_cast<std::size_t>(path[1])].variable == "FSDSC");
    CHECK(full.nodes[static_cast<std::size_t>(path[2])].variable == "TREFHT");
}

TEST_CASE("source_impact_path prefers the higher-|score| predecessor in a diamond") {
    const auto c = default_constraints();
    // Two FSDSC predecessors of the final TREFHT node; both reach the
    // AEROD_v source. Best-first expansion picks |score| 10 over 3.
    const std::vector<ImpactRecord> recs{
        record("AEROD_v", "Tropical", 1, 40, 5.0),
        record("FSDSC", "Tropical", 20, 80, -10.0),
        record("FSDSC", "Subtropical North", 20, 80, 3.0),
        record("TREFHT", "Subtropical North", 60, 120, -5.0),
    };
    const auto full = build_full_dag(recs, c);
    REQUIRE(full.edge_count() >= 3);
    const auto path = source_impact_path(full, node_index(full, "AEROD_v", 1),
                                         node_index(full, "TREFHT", 60));
    REQUIRE(path.size() == 3);
    CHECK(full.nodes[static_cast<std::size_t>(path[1])].region == "Tropical");
    CHECK(full.nodes[static_cast<std::size_t>(path[1])].score == -10.0);
}

TEST_CASE("source_impact_path backtracks out of a dead-end high-score branch") {
    const auto c = default_constraints();
    // The |score|-50 FSDSC node has no AEROD_v ancestor; search must
    // fall back to the weaker branch that does reach the source.
    const std::vector<ImpactRecord> recs{
        record("AEROD_v", "Tropical", 1, 40, 5.0),
        record("FSDSC", "Tropical", 20, 80, -2.0),
        record("FSDSC", "Subtropical North", 55, 90, 50.0),
        record("TREFHT", "Tropical", 60, 120, -5.0),
    };
    const auto full = build_full_dag(recs, c);
    const auto path = source_impact_path(full, node_index(full, "AEROD_v", 1),
                                         node_index(full, "TREFHT", 60));
    REQUIRE(path.size() == 3);
    CHECK(full.nodes[static_cast<std::size_t>(path[1])].score == -2.0);
}

TEST_CASE("source_impact_path throws when no path exists") {
    const auto c = default_constraints();
    const auto full = build_full_dag({record("AEROD_v", "Tropical", 1, 40, 5.0),
                                      record("TREFHT", "Polar North", 200, 240, -5.0)},
                                     c);
    CHECK_THROWS_AS(source_impact_path(full, node_index(full, "AEROD_v", 1),
                                       node_index(full, "TREFHT", 200)),
                    PathNotFoundError);
}

TEST_CASE("find_node and find_source_node") {
    const auto c = default_constraints();
    const auto full = build_full_dag({record("AEROD_v", "Tropical", 50, 90, 5.0),
                                      record("AEROD_v", "Tropical", 1, 40, 5.0),
                                      record("FSDSC", "Tropical", 20, 80, -5.0)},
                                     c);
    const auto hit = find_node(full, {"FSDSC", "Tropical", kBase + 30});
    REQUIRE(hit.has_value());
    CHECK(full.nodes[static_cast<std::size_t>(*hit)].variable == "FSDSC");
    CHECK_FALSE(find_node(full, {"FSDSC", "Tropical", kBase + 300}).has_value());
    CHECK_FALSE(find_node(full, {"TREFHT", "Tropical", kBase + 30}).has_value());

    const auto src = find_source_node(full, "AEROD_v", "Tropical");
    REQUIRE(src.has_value());
    CHECK(full.nodes[static_cast<std::size_t>(*src)].interval.start_index == 1);
    CHECK_FALSE(find_source_node(full, "AEROD_v", "Polar South").has_value());
}

TEST_CASE("DOT export is deterministic and structured") {
    const auto c = default_constraints();
    const auto empty = build_full_dag({}, c);
    const auto empty_dot = export_dot(empty);
    CHECK(empty_dot.find("digraph pathway {") != std::string::npos);

    const auto g = build_full_dag({record("AEROD_v", "Tropical", 1, 10, 5.0),
                                   record("FSDSC", "Tropical", 5, 20, -5.0)},
                                  c);
    const auto dot = export_dot(g);
    CHECK(dot == export_dot(g));
    CHECK(std::count(dot.begin(), dot.end(), '>') >= 1);
    CHECK(dot.find("AEROD_v|Tropical|1991-06-01..1991-06-10|5.000") != std::string::npos);
    std::size_t edge_count = 0;
    for (std::size_t pos = dot.find(" -> "); pos != std::string::npos;
         pos = dot.find(" -> ", pos + 1))
        ++edge_count;
    CHECK(edge_count == 1);

    const auto json = export_json(g);
    CHECK(json == export_json(g));
    CHECK(json.find("\"edges\"") != std::string::npos);
}

TEST_CASE("randomized graph properties") {
    const auto c = default_constraints();
    oracle::Rng rng(9001);
    for (int trial = 0; trial < 200; ++trial) {
        const auto recs = random_records(rng, c, 3 + static_cast<int>(rng.next_u64() % 25));
        const auto full = build_full_dag(recs, c);

        // Acyclicity: a topological order exists and covers every node.
        const auto order = topological_order(full);
        CHECK(order.size() == full.node_count());

        // Edge soundness against an independent restatement of the rules.
        for (const auto& [a, b] : full.edges) {
            CHECK(edge_admissible(full.nodes[static_cast<std::size_t>(a)],
                                  full.nodes[static_cast<std::size_t>(b)], c));
        }

        // Node rule: everything above epsilon is in, nothing else.
        std::size_t expected_nodes = 0;
        for (const auto& r : recs)
            if (std::abs(r.score) > c.epsilon) ++expected_nodes;
        CHECK(full.node_count() == expected_nodes);

        // Raising epsilon never adds nodes or edges.
        auto stricter = c;
        stricter.epsilon = 2.5;
        const auto strict = build_full_dag(recs, stricter);
        CHECK(strict.node_count() <= full.node_count());
        CHECK(strict.edge_count() <= full.edge_count());

        if (full.node_count() == 0) continue;

        // Subgraph chain: Impact nodes/edges are a subset of Full's.
        const int final_node = static_cast<int>(rng.next_u64() % full.node_count());
        const auto impact = impact_dag(full, final_node);
        CHECK(impact.node_count() <= full.node_count());
        CHECK(impact.edge_count() <= full.edge_count());
        std::set<std::pair<std::string, Index>> full_keys;
        for (const auto& n : full.nodes) full_keys.insert({n.variable + "/" + n.region, n.interval.start_index});
        for (const auto& n : impact.nodes)
            CHECK(full_keys.count({n.variable + "/" + n.region, n.interval.start_index}) == 1);
        CHECK(topological_order(impact).size() == impact.node_count());

        // Path property: simple, source-first, final-last, edges real.
        const auto fin_in_impact = find_node(impact, {full.nodes[static_cast<std::size_t>(final_node)].variable,
                                                      full.nodes[static_cast<std::size_t>(final_node)].region,
                                                      full.nodes[static_cast<std::size_t>(final_node)].interval.start_date});
        REQUIRE(fin_in_impact.has_value());
        for (std::size_t s = 0; s < impact.node_count(); ++s) {
            std::vector<int> path;
            try {
                path = source_impact_path(impact, static_cast<int>(s), *fin_in_impact);
            } catch (const PathNotFoundError&) {
                continue;
            }
            REQUIRE_FALSE(path.empty());
            CHECK(path.front() == static_cast<int>(s));
            CHECK(path.back() == *fin_in_impact);
            std::set<int> seen(path.begin(), path.end());
            CHECK(seen.size() == path.size());
            std::set<std::pair<int, int>> edges(impact.edges.begin(), impact.edges.end());
            for (std::size_t k = 0; k + 1 < path.size(); ++k)
                CHECK(edges.count({path[k], path[k + 1]}) == 1);
        }
    }
}

TEST_CASE("impact_dag rejects an out-of-range final node") {
    const auto c = default_constraints();
    const auto full = build_full_dag({record("AEROD_v", "Tropical", 1, 40, 5.0)}, c);
    CHECK_THROWS_AS(impact_dag(full, 5), DataError);
    CHECK_THROWS_AS(impact_dag(full, -1), DataError);
}
