#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ggmeval/graph.hpp"
#include "ggmeval/metrics_nn.hpp"

namespace ggm {

// Normalized bin weights (sum 1). A graph with nothing to bin contributes a
// delta at bin 0.
struct Histogram {
    std::vector<double> w;
};

// Degree counts over bins 0..max_degree, normalized.
Histogram degree_hist(const Graph& g);

// Local clustering coefficients (degree < 2 counts as 0) over `bins` equal
// bins spanning [0, 1]; a coefficient of exactly 1 lands in the last bin.
Histogram clustering_hist(const Graph& g, int bins = 100);

// Node participation counts for the 15 automorphism orbits of the connected
// graphlets on at most four nodes (0 = edge endpoint ... 14 = K4 corner).
std::vector<std::array<std::int64_t, 15>> orbit_counts_per_node(const Graph& g);

// Graph descriptor: per-orbit mean over nodes (zero vector for empty graphs).
std::array<double, 15> orbit_counts(const Graph& g);

// Earth mover's distance between 1-D histograms with unit ground distance
// between adjacent bins; the shorter support is zero-padded.
double emd_1d(const Histogram& h1, const Histogram& h2);

enum class GraphStatistic { degree, clustering, orbit };

// Biased MMD over per-graph descriptors. degree/clustering use a Gaussian
// kernel on the EMD (sigma 1.0 / 0.1); orbit uses a Gaussian on the Euclidean
// distance between mean orbit-count vectors (sigma 30). squared_distance
// selects exp(-d^2/2s^2) (default, matching the reference kernels) versus
// exp(-d/2s^2).
MetricScore classical_mmd(const GraphSet& sr, const GraphSet& sg, GraphStatistic stat,
                          bool squared_distance = true);

}  // namespace ggm
