#pragma once

#include "ggmeval/graph.hpp"
#include "ggmeval/rng.hpp"

namespace ggm {

// rows x cols lattice; nodes indexed row-major.
Graph generate_grid(int rows, int cols);

// Tree whose nodes all lie within two hops of a backbone path. The backbone
// length is drawn uniformly from [0, 2*expected_backbone] (rounded), each
// backbone node grows a leg with probability p1, each leg a second-level leg
// with probability p2.
Graph generate_lobster(int expected_backbone, double p1, double p2, Rng& rng);

// Two Erdos-Renyi(n/2, 0.3) blocks plus round(0.05*n) distinct inter-block
// edges chosen uniformly. n must be even and >= 4.
Graph generate_community(int num_nodes, Rng& rng);

// Each of the C(n,2) node pairs is an edge independently with probability p.
Graph generate_er(int n, double p, Rng& rng);

// E-R graph matched to g: same node count, p = |E| / |V|^2 with |E| counting
// undirected edges once. count_both_directions doubles |E| in that formula.
Graph er_twin(const Graph& g, Rng& rng, bool count_both_directions = false);

// Dataset samplers mirroring the synthetic families used by the experiments.
GraphSet sample_grid_set(int count, Rng& rng);        // rows, cols ~ U{10..20}
GraphSet sample_lobster_set(int count, Rng& rng);     // rejection: 10 <= |V| <= 100
GraphSet sample_community_set(int count, Rng& rng);   // |V| even ~ U{60..160}
GraphSet sample_er_set(int count, int n, double p, Rng& rng);

// Attaches random categorical labels in place and updates the schema. Category
// frequencies decay geometrically (ratio 0.3), mirroring natural label
// distributions where one category dominates, e.g. atom or bond types in
// molecules. A skewed base distribution keeps uniform relabeling perturbations
// meaningful: resampling uniform labels uniformly would leave the label
// distribution unchanged.
void assign_random_features(GraphSet& s, int node_categories, int edge_categories,
                            Rng& rng);

}  // namespace ggm
