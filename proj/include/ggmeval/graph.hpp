#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace ggm {

// Cardinalities of the categorical feature spaces; 0 means "absent".
struct FeatureSchema {
    int node_categories = 0;
    int edge_categories = 0;
    bool operator==(const FeatureSchema&) const = default;
    bool has_node() const { return node_categories > 0; }
    bool has_edge() const { return edge_categories > 0; }
};

// Simple undirected graph. Edges are kept canonical: first < second,
// lexicographically sorted, no duplicates. Feature vectors are either empty
// or exactly sized (node_features per node, edge_features aligned with edges).
struct Graph {
    int num_nodes = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<int> node_features;
    std::vector<int> edge_features;

    bool operator==(const Graph&) const = default;

    bool has_node_features() const { return !node_features.empty(); }
    bool has_edge_features() const { return !edge_features.empty(); }
    std::size_t num_edges() const { return edges.size(); }

    // Sorts edges into canonical order, keeping edge_features aligned.
    void canonicalize();

    // Returns an empty string when all invariants hold, else a description.
    std::string validate(const FeatureSchema* schema = nullptr) const;
};

struct GraphSet {
    std::vector<Graph> graphs;
    FeatureSchema schema;

    bool operator==(const GraphSet&) const = default;
    std::size_t size() const { return graphs.size(); }

    std::string validate() const;
};

std::vector<int> degrees(const Graph& g);
std::vector<std::vector<int>> adjacency(const Graph& g);

// Neighbor lists plus parallel edge-id lists (ids index into g.edges).
void adjacency_with_edges(const Graph& g,
                          std::vector<std::vector<int>>& nbr,
                          std::vector<std::vector<int>>& eid);

// Smallest schema covering the features present in `graphs`. Throws
// std::runtime_error when feature presence differs between graphs.
FeatureSchema derive_schema(const std::vector<Graph>& graphs);

// Per-node GNN input features: one-hot node category (when the schema has
// node features) with the raw integer degree appended.
Eigen::MatrixXd degree_augment(const Graph& g, const FeatureSchema& schema);

inline int input_feature_width(const FeatureSchema& schema) {
    return (schema.has_node() ? schema.node_categories : 0) + 1;
}

}  // namespace ggm
