#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ggmeval/graph.hpp"

namespace ggm {

enum class Agg { sum, mean, max };
enum class WeightInit { orthogonal, uniform };

Agg parse_agg(const std::string& name);
std::string agg_name(Agg a);

struct GinConfig {
    int layers = 3;
    int dim = 35;
    Agg aggregator = Agg::sum;
    Agg readout = Agg::sum;
    bool concat_layers = true;
    int mlp_layers = 2;
    std::uint64_t seed = 0;
    WeightInit init = WeightInit::orthogonal;

    int output_width() const { return concat_layers ? layers * dim : dim; }
};

// Short stable identifier for reports, e.g. "L3-d35-sum-sum-concat".
std::string config_id(const GinConfig& c);

// Inverse of config_id; seed and mlp_layers keep their defaults.
GinConfig parse_config_id(const std::string& id);

// Frozen random weights. w[l][s] is the s-th linear map of layer l's MLP,
// stored as (out x in); b[l][s] is its bias, drawn uniformly from
// +-1/sqrt(fan_in) at init time and frozen like the weights.
struct GinWeights {
    std::vector<std::vector<Eigen::MatrixXd>> w;
    std::vector<std::vector<Eigen::VectorXd>> b;
    int input_width = 0;  // node input features (one-hot category + degree)
    int edge_width = 0;   // one-hot edge category appended to each message
    FeatureSchema schema;
};

GinWeights init_weights(const GinConfig& config, const FeatureSchema& schema);

// One graph -> one row vector (layers*dim wide, or dim without concat).
Eigen::VectorXd forward(const Graph& g, const GinWeights& weights, const GinConfig& config);

// Whole set -> row-per-graph matrix, parallel over graphs, order preserved.
Eigen::MatrixXd embed_set(const GraphSet& s, const GinWeights& weights, const GinConfig& config);

// Projection onto the top-k principal components of the column-centered data.
// Components beyond the data's rank come out as zero columns (with a warning
// on stderr); each component's largest-magnitude loading is made positive.
Eigen::MatrixXd pca_project(const Eigen::MatrixXd& x, int k);

// Row-major CSV with 17 significant digits (lossless for doubles).
void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path);

}  // namespace ggm
