#pragma once

#include "impactpath/stats.hpp"

#include <optional>
#include <set>
#include <string>

namespace impactpath {

// Edge admissibility rules for pathway graphs: variable dependencies
// (acyclic at the variable level apart from self-loops), symmetric
// region adjacency, a significance tolerance on |score| and optional
// temporal slack for sparse data.
struct PathwayConstraints {
    std::vector<std::string> variables;  // rank order (upstream first)
    std::set<std::pair<std::string, std::string>> variable_deps;
    std::vector<std::string> regions;    // index order along the spatial chain
    std::set<std::pair<std::string, std::string>> region_adjacency;  // stored both ways
    Scalar epsilon = 1.0;
    std::int32_t slack_days = 0;

    int variable_rank(const std::string& v) const;
    int region_index(const std::string& r) const;
    bool variable_edge(const std::string& a, const std::string& b) const {
        return variable_deps.count({a, b}) > 0;
    }
    bool regions_adjacent(const std::string& a, const std::string& b) const {
        return a == b || region_adjacency.count({a, b}) > 0;
    }

    void validate() const;
};

// Surface-cooling defaults: AEROD_v -> FSDSC -> TREFHT with self-loops,
// over the south-to-north zonal band chain (each band self-adjacent).
PathwayConstraints default_constraints();

enum class GraphKind { Full, Impact, SourceImpact };

struct PathwayGraph {
    GraphKind kind = GraphKind::Full;
    std::vector<ImpactRecord> nodes;          // canonical order
    std::vector<std::pair<int, int>> edges;   // (from, to) node indices, lexicographic

    PathwayConstraints constraints;

    std::size_t node_count() const { return nodes.size(); }
    std::size_t edge_count() const { return edges.size(); }
};

// Strict ordering over records: (start date, variable rank, region index,
// end date); every edge respects it, which guarantees acyclicity.
bool canonical_less(const ImpactRecord& a, const ImpactRecord& b,
                    const PathwayConstraints& constraints);

// Nodes are records with |score| > epsilon; an edge a->b exists iff b
// starts within [a.start, a.end + slack], the regions are adjacent or
// equal, (a.variable -> b.variable) is a declared dependency, and a
// precedes b canonically.
PathwayGraph build_full_dag(const std::vector<ImpactRecord>& impacts,
                            const PathwayConstraints& constraints);

// Locates a node by (variable, region, date contained in its interval).
struct NodeSelector {
    std::string variable;
    std::string region;
    Date date;
};

std::optional<int> find_node(const PathwayGraph& graph, const NodeSelector& selector);

// Induced subgraph on the final node and all of its ancestors.
PathwayGraph impact_dag(const PathwayGraph& full, int final_node);

// Greedy best-first search over reversed edges from the final node with
// priority |score|; expanded nodes are never revisited, so dead-end
// branches backtrack through the remaining frontier. Returns the
// source-to-final node index sequence (into `impact.nodes`).
std::vector<int> source_impact_path(const PathwayGraph& impact, int source_node, int final_node);

// Earliest-starting node of the given variable in the given region;
// the default source for source-impact paths.
std::optional<int> find_source_node(const PathwayGraph& graph, const std::string& variable,
                                    const std::string& region);

// Topological order of the graph; throws DataError on a cycle.
std::vector<int> topological_order(const PathwayGraph& graph);

// Deterministic Graphviz DOT serialization; node labels are
// `variable|region|start..end|score`.
std::string export_dot(const PathwayGraph& graph);

// Deterministic JSON {nodes: [...], edges: [[from,to],...]}.
std::string export_json(const PathwayGraph& graph);

}  // namespace impactpath
