#include "impactpath/pathway.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <sstream>

namespace impactpath {

int PathwayConstraints::variable_rank(const std::string& v) const {
    for (std::size_t i = 0; i < variables.size(); ++i)
        if (variables[i] == v) return static_cast<int>(i);
    throw ConfigError("variable '" + v + "' not declared in pathway constraints");
}

int PathwayConstraints::region_index(const std::string& r) const {
    for (std::size_t i = 0; i < regions.size(); ++i)
        if (regions[i] == r) return static_cast<int>(i);
    throw ConfigError("region '" + r + "' not declared in pathway constraints");
}

void PathwayConstraints::validate() const {
    if (variables.empty()) throw ConfigError("pathway: no variables declared");
    if (regions.empty()) throw ConfigError("pathway: no regions declared");
    if (!(epsilon >= 0.0)) throw ConfigError("pathway: epsilon must be >= 0");
    if (slack_days < 0) throw ConfigError("pathway: slack_days must be >= 0");
    // Non-self dependencies must point down the declared rank order,
    // which keeps the variable relation acyclic.
    for (const auto& [a, b] : variable_deps)
        if (a != b && variable_rank(a) >= variable_rank(b))
            throw ConfigError("pathway: variable dependency " + a + "->" + b +
                              " violates the declared variable order");
    for (const auto& [a, b] : region_adjacency) {
        region_index(a);
        region_index(b);
        if (region_adjacency.count({b, a}) == 0)
            throw ConfigError("pathway: region adjacency must be symmetric (" + a + ", " + b + ")");
    }
}

PathwayConstraints default_constraints() {
    PathwayConstraints c;
    c.variables = {"AEROD_v", "FSDSC", "TREFHT"};
    c.variable_deps = {{"AEROD_v", "AEROD_v"}, {"AEROD_v", "FSDSC"}, {"FSDSC", "FSDSC"},
                       {"FSDSC", "TREFHT"},    {"TREFHT", "TREFHT"}};
    c.regions = {"Polar South",       "Temperate South", "Subtropical South", "Tropical",
                 "Subtropical North", "Temperate North", "Polar North"};
    for (std::size_t i = 0; i + 1 < c.regions.size(); ++i) {
        c.region_adjacency.insert({c.regions[i], c.regions[i + 1]});
        c.region_adjacency.insert({c.regions[i + 1], c.regions[i]});
    }
    return c;
}

bool canonical_less(const ImpactRecord& a, const ImpactRecord& b,
                    const PathwayConstraints& constraints) {
    if (a.interval.start_date != b.interval.start_date)
        return a.interval.start_date < b.interval.start_date;
    const int ra = constraints.variable_rank(a.variable);
    const int rb = constraints.variable_rank(b.variable);
    if (ra != rb) return ra < rb;
    const int ga = constraints.region_index(a.region);
    const int gb = constraints.region_index(b.region);
    if (ga != gb) return ga < gb;
    return a.interval.end_date < b.interval.end_date;
}

PathwayGraph build_full_dag(const std::vector<ImpactRecord>& impacts,
                            const PathwayConstraints& constraints) {
    constraints.validate();

    PathwayGraph graph;
    graph.kind = GraphKind::Full;
    graph.constraints = constraints;
    for (const auto& rec : impacts)
        if (std::abs(rec.score) > constraints.epsilon) graph.nodes.push_back(rec);
    std::stable_sort(graph.nodes.begin(), graph.nodes.end(),
                     [&](const ImpactRecord& a, const ImpactRecord& b) {
                         return canonical_less(a, b, constraints);
                     });

    const int count = static_cast<int>(graph.nodes.size());
    for (int i = 0; i < count; ++i) {
        const auto& a = graph.nodes[static_cast<std::size_t>(i)];
        for (int j = 0; j < count; ++j) {
            if (i == j) continue;
            const auto& b = graph.nodes[static_cast<std::size_t>(j)];
            if (!canonical_less(a, b, constraints)) continue;
            if (b.interval.start_date < a.interval.start_date) continue;
            if (b.interval.start_date > a.interval.end_date + constraints.slack_days) continue;
            if (!constraints.regions_adjacent(a.region, b.region)) continue;
            if (!constraints.variable_edge(a.variable, b.variable)) continue;
            graph.edges.emplace_back(i, j);
        }
    }
    std::sort(graph.edges.begin(), graph.edges.end());
    return graph;
}

std::optional<int> find_node(const PathwayGraph& graph, const NodeSelector& selector) {
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        if (n.variable == selector.variable && n.region == selector.region &&
            n.interval.start_date <= selector.date && selector.date <= n.interval.end_date)
            return static_cast<int>(i);
    }
    return std::nullopt;
}

std::optional<int> find_source_node(const PathwayGraph& graph, const std::string& variable,
                                    const std::string& region) {
    std::optional<int> best;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        if (n.variable != variable || n.region != region) continue;
        if (!best || n.interval.start_date <
                         graph.nodes[static_cast<std::size_t>(*best)].interval.start_date)
            best = static_cast<int>(i);
    }
    return best;
}

PathwayGraph impact_dag(const PathwayGraph& full, int final_node) {
    if (final_node < 0 || final_node >= static_cast<int>(full.nodes.size()))
        throw DataError("impact_dag: final node not in graph");

    std::vector<std::vector<int>> parents(full.nodes.size());
    for (const auto& [from, to] : full.edges)
        parents[static_cast<std::size_t>(to)].push_back(from);

    std::vector<char> keep(full.nodes.size(), 0);
    std::vector<int> stack{final_node};
    keep[static_cast<std::size_t>(final_node)] = 1;
    while (!stack.empty()) {
        const int node = stack.back();
        stack.pop_back();
        for (const int parent : parents[static_cast<std::size_t>(node)]) {
            if (!keep[static_cast<std::size_t>(parent)]) {
                keep[static_cast<std::size_t>(parent)] = 1;
                stack.push_back(parent);
            }
        }
    }

    PathwayGraph out;
    out.kind = GraphKind::Impact;
    out.constraints = full.constraints;
    std::vector<int> remap(full.nodes.size(), -1);
    for (std::size_t i = 0; i < full.nodes.size(); ++i) {
        if (keep[i]) {
            remap[i] = static_cast<int>(out.nodes.size());
            out.nodes.push_back(full.nodes[i]);
        }
    }
    for (const auto& [from, to] : full.edges)
        if (keep[static_cast<std::size_t>(from)] && keep[static_cast<std::size_t>(to)])
            out.edges.emplace_back(remap[static_cast<std::size_t>(from)],
                                   remap[static_cast<std::size_t>(to)]);
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

std::vector<int> source_impact_path(const PathwayGraph& impact, int source_node, int final_node) {
    const int count = static_cast<int>(impact.nodes.size());
    if (source_node < 0 || source_node >= count || final_node < 0 || final_node >= count)
        throw DataError("source_impact_path: node index out of range");

    std::vector<std::vector<int>> parents(impact.nodes.size());
    for (const auto& [from, to] : impact.edges)
        parents[static_cast<std::size_t>(to)].push_back(from);

    // Max-|score| frontier; canonical node index breaks ties.
    const auto priority = [&](int node) {
        return std::abs(impact.nodes[static_cast<std::size_t>(node)].score);
    };
    using Entry = std::pair<Scalar, int>;
    const auto cmp = [](const Entry& a, const Entry& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second > b.second;
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> frontier(cmp);
    std::vector<int> parent_of(impact.nodes.size(), -1);
    std::vector<char> seen(impact.nodes.size(), 0);

    frontier.push({priority(final_node), final_node});
    seen[static_cast<std::size_t>(final_node)] = 1;
    while (!frontier.empty()) {
        const int node = frontier.top().second;
        frontier.pop();
        if (node == source_node) {
            std::vector<int> path;
            for (int at = source_node; at != -1; at = parent_of[static_cast<std::size_t>(at)])
                path.push_back(at);
            return path;  // already source -> final: parents point toward the final node
        }
        for (const int up : parents[static_cast<std::size_t>(node)]) {
            if (seen[static_cast<std::size_t>(up)]) continue;
            seen[static_cast<std::size_t>(up)] = 1;
            parent_of[static_cast<std::size_t>(up)] = node;
            frontier.push({priority(up), up});
        }
    }
    throw PathNotFoundError("no path from source to final impact node");
}

std::vector<int> topological_order(const PathwayGraph& graph) {
    const std::size_t count = graph.nodes.size();
    std::vector<int> indegree(count, 0);
    std::vector<std::vector<int>> out(count);
    for (const auto& [from, to] : graph.edges) {
        out[static_cast<std::size_t>(from)].push_back(to);
        ++indegree[static_cast<std::size_t>(to)];
    }
    std::vector<int> order;
    std::vector<int> ready;
    for (std::size_t i = 0; i < count; ++i)
        if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
    while (!ready.empty()) {
        const int node = ready.back();
        ready.pop_back();
        order.push_back(node);
        for (const int next : out[static_cast<std::size_t>(node)])
            if (--indegree[static_cast<std::size_t>(next)] == 0) ready.push_back(next);
    }
    if (order.size() != count) throw DataError("pathway graph contains a cycle");
    return order;
}

namespace {

std::string node_label(const ImpactRecord& n) {
    char score[32];
    std::snprintf(score, sizeof(score), "%.3f", n.score);
    return n.variable + "|" + n.region + "|" + n.interval.start_date.to_string() + ".." +
           n.interval.end_date.to_string() + "|" + score;
}

const char* kind_name(GraphKind kind) {
    switch (kind) {
        case GraphKind::Full: return "full";
        case GraphKind::Impact: return "impact";
        default: return "source_impact";
    }
}

}  // namespace

std::string export_dot(const PathwayGraph& graph) {
    std::ostringstream out;
    out << "// pathway DAG (" << kind_name(graph.kind) << "): " << graph.nodes.size()
        << " nodes, " << graph.edges.size() << " edges\n";
    out << "digraph pathway {\n";
    for (std::size_t i = 0; i < graph.nodes.size(); ++i)
        out << "  n" << i << " [label=\"" << node_label(graph.nodes[i]) << "\"];\n";
    for (const auto& [from, to] : graph.edges) out << "  n" << from << " -> n" << to << ";\n";
    out << "}\n";
    return out.str();
}

std::string export_json(const PathwayGraph& graph) {
    std::ostringstream out;
    out << "{\n  \"kind\": \"" << kind_name(graph.kind) << "\",\n  \"nodes\": [\n";
    const auto num = [](Scalar x) {
        if (std::isinf(x)) return std::string(x > 0 ? "\"inf\"" : "\"-inf\"");
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        out << "    {\"id\": " << i << ", \"variable\": \"" << n.variable << "\", \"region\": \""
            << n.region << "\", \"start\": \"" << n.interval.start_date.to_string()
            << "\", \"end\": \"" << n.interval.end_date.to_string()
            << "\", \"mean_diff\": " << num(n.mean_diff) << ", \"ci_low\": " << num(n.ci_low)
            << ", \"ci_high\": " << num(n.ci_high) << ", \"score\": " << num(n.score) << "}"
            << (i + 1 < graph.nodes.size() ? ",\n" : "\n");
    }
    out << "  ],\n  \"edges\": [";
    for (std::size_t k = 0; k < graph.edges.size(); ++k)
        out << "[" << graph.edges[k].first << "," << graph.edges[k].second << "]"
            << (k + 1 < graph.edges.size() ? "," : "");
    out << "]\n}\n";
    return out.str();
}

}  // namespace impactpath
