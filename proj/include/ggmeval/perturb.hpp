#pragma once

#include "ggmeval/cluster.hpp"
#include "ggmeval/graph.hpp"
#include "ggmeval/rng.hpp"

namespace ggm {

// All perturbations take a degree t in [0,1] and return a new set of the same
// size. t=0 is always the identity. Calling the same perturbation with the
// same rng seed and a larger t extends the t-smaller result (the affected
// subset grows monotonically), which keeps perturbation sweeps monotone.

// Replaces round(t*|S|) members, chosen by a seed-stable random permutation
// prefix, with Erdos-Renyi twins of the members they displace.
GraphSet perturb_mix(const GraphSet& s, double t, Rng& rng);

// Rewires each edge independently with probability t: one endpoint is kept
// (fair coin), the other is redrawn uniformly over the nodes. Draws that
// would create a self-loop or duplicate edge are rejected and redrawn, up to
// 100 times; after that the edge is left unchanged. Edge counts and any edge
// features are preserved.
GraphSet perturb_rewire(const GraphSet& s, double t, Rng& rng);

// Shuffles the cluster ids with the rng, then replaces every member of the
// first floor(t*K) clusters by a copy of that cluster's exemplar graph.
GraphSet perturb_mode_collapse(const GraphSet& s, const Clustering& clustering,
                               double t, Rng& rng);

// Shuffles the cluster ids with the rng, then drops the first floor(t*(K-1))
// clusters; members of dropped clusters are replaced by uniformly chosen
// duplicates from the surviving clusters. At least one cluster survives.
GraphSet perturb_mode_drop(const GraphSet& s, const Clustering& clustering,
                           double t, Rng& rng);

// Resamples each node (edge) feature uniformly over its category set with
// probability t, leaving structure untouched. Requires the schema to carry
// the respective features.
GraphSet perturb_node_feats(const GraphSet& s, double t, Rng& rng);
GraphSet perturb_edge_feats(const GraphSet& s, double t, Rng& rng);

}  // namespace ggm
