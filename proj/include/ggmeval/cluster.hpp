#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ggmeval/graph.hpp"

namespace ggm {

struct Clustering {
    std::vector<int> assignment;  // graph index -> cluster id (0..k-1)
    std::vector<int> exemplars;   // cluster id -> graph index
    bool fallback = false;        // no exemplar emerged; collapsed to one cluster

    int num_clusters() const { return static_cast<int>(exemplars.size()); }
};

// Weisfeiler-Lehman subtree kernel: h refinement rounds from uniform initial
// labels; the kernel is the dot product of pattern-count vectors over rounds
// 0..h. `normalized` divides by sqrt(k11 * k22).
double wl_subtree_kernel(const Graph& g1, const Graph& g2, int h, bool normalized = false);

// Pairwise normalized WL kernel matrix over a whole set (shared label maps).
Eigen::MatrixXd wl_kernel_matrix(const GraphSet& s, int h);

// Standard responsibility/availability message passing. Preferences (the
// similarity diagonal) are set to the median off-diagonal similarity.
// Exemplars are {i : r(i,i) + a(i,i) > 0}; if none emerge, the result is a
// single flagged cluster around the point with the highest total similarity.
Clustering affinity_propagation(const Eigen::MatrixXd& similarity, double damping = 0.5,
                                int max_iter = 200, int stable_rounds = 15);

// WL kernel matrix -> affinity propagation.
Clustering cluster_graphs(const GraphSet& s, int wl_iterations = 3);

}  // namespace ggm
