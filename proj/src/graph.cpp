#include "ggmeval/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ggm {

void Graph::canonicalize() {
    for (auto& e : edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    if (edge_features.empty()) {
        std::sort(edges.begin(), edges.end());
        return;
    }
    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return edges[a] < edges[b]; });
    std::vector<std::pair<int, int>> es(edges.size());
    std::vector<int> fs(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        es[i] = edges[order[i]];
        fs[i] = edge_features[order[i]];
    }
    edges = std::move(es);
    edge_features = std::move(fs);
}

std::string Graph::validate(const FeatureSchema* schema) const {
    if (num_nodes < 0) return "negative node count";
    for (std::size_t i = 0; i < edges.size(); ++i) {
        auto [a, b] = edges[i];
        if (a < 0 || b < 0 || a >= num_nodes || b >= num_nodes)
            return "edge endpoint out of range at edge " + std::to_string(i);
        if (a == b) return "self-loop at edge " + std::to_string(i);
        if (a > b) return "edge not in canonical order at edge " + std::to_string(i);
        if (i > 0 && !(edges[i - 1] < edges[i]))
            return "duplicate or unsorted edge at index " + std::to_string(i);
    }
    if (!node_features.empty() &&
        node_features.size() != static_cast<std::size_t>(num_nodes))
        return "node feature count != node count";
    if (!edge_features.empty() && edge_features.size() != edges.size())
        return "edge feature count != edge count";
    for (int f : node_features)
        if (f < 0) return "negative node feature";
    for (int f : edge_features)
        if (f < 0) return "negative edge feature";
    if (schema) {
        if (num_nodes > 0 && schema->has_node() != has_node_features())
            return "node feature presence does not match schema";
        if (!edges.empty() && schema->has_edge() != has_edge_features())
            return "edge feature presence does not match schema";
        for (int f : node_features)
            if (f >= schema->node_categories) return "node feature out of schema range";
        for (int f : edge_features)
            if (f >= schema->edge_categories) return "edge feature out of schema range";
    }
    return {};
}

std::string GraphSet::validate() const {
    for (std::size_t i = 0; i < graphs.size(); ++i) {
        std::string err = graphs[i].validate(&schema);
        if (!err.empty()) return "graph " + std::to_string(i) + ": " + err;
    }
    return {};
}

std::vector<int> degrees(const Graph& g) {
    std::vector<int> d(g.num_nodes, 0);
    for (auto [a, b] : g.edges) {
        ++d[a];
        ++d[b];
    }
    return d;
}

std::vector<std::vector<int>> adjacency(const Graph& g) {
    std::vector<std::vector<int>> adj(g.num_nodes);
    for (auto [a, b] : g.edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
}

void adjacency_with_edges(const Graph& g,
                          std::vector<std::vector<int>>& nbr,
                          std::vector<std::vector<int>>& eid) {
    nbr.assign(g.num_nodes, {});
    eid.assign(g.num_nodes, {});
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        auto [a, b] = g.edges[i];
        nbr[a].push_back(b);
        eid[a].push_back(static_cast<int>(i));
        nbr[b].push_back(a);
        eid[b].push_back(static_cast<int>(i));
    }
}

FeatureSchema derive_schema(const std::vector<Graph>& graphs) {
    FeatureSchema s;
    // Presence is decided by the first graph able to carry the feature
    // (a graph with no edges says nothing about edge features).
    int node_present = -1, edge_present = -1;
    for (const Graph& g : graphs) {
        if (g.num_nodes > 0) {
            int p = g.has_node_features() ? 1 : 0;
            if (node_present == -1) node_present = p;
            if (node_present != p)
                throw std::runtime_error("node feature presence differs between graphs");
        }
        if (!g.edges.empty()) {
            int p = g.has_edge_features() ? 1 : 0;
            if (edge_present == -1) edge_present = p;
            if (edge_present != p)
                throw std::runtime_error("edge feature presence differs between graphs");
        }
        for (int f : g.node_features) s.node_categories = std::max(s.node_categories, f + 1);
        for (int f : g.edge_features) s.edge_categories = std::max(s.edge_categories, f + 1);
    }
    return s;
}

Eigen::MatrixXd degree_augment(const Graph& g, const FeatureSchema& schema) {
    const int w = input_feature_width(schema);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(g.num_nodes, w);
    std::vector<int> deg = degrees(g);
    for (int v = 0; v < g.num_nodes; ++v) {
        if (schema.has_node()) x(v, g.node_features[v]) = 1.0;
        x(v, w - 1) = static_cast<double>(deg[v]);
    }
    return x;
}

}  // namespace ggm
