#include "ggmeval/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ggmeval/generators.hpp"

namespace ggm {

GraphSet perturb_mix(const GraphSet& s, double t, Rng& rng) {
    const int n = static_cast<int>(s.size());
    GraphSet out = s;
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    // Twins are generated in permutation order so that a larger t extends the
    // smaller-t replacement set without disturbing the earlier twins.
    const int replace = static_cast<int>(std::lround(t * n));
    for (int k = 0; k < replace && k < n; ++k) {
        out.graphs[order[k]] = er_twin(s.graphs[order[k]], rng);
    }
    return out;
}

GraphSet perturb_rewire(const GraphSet& s, double t, Rng& rng) {
    GraphSet out = s;
    for (Graph& g : out.graphs) {
        const int n = g.num_nodes;
        std::set<std::pair<int, int>> present(g.edges.begin(), g.edges.end());
        for (size_t e = 0; e < g.edges.size(); ++e) {
            if (!rng.bernoulli(t)) continue;
            auto [a, b] = g.edges[e];
            const int keep = rng.bernoulli(0.5) ? a : b;
            const int other = keep == a ? b : a;
            present.erase(g.edges[e]);
            int target = other;
            for (int attempt = 0; attempt < 100; ++attempt) {
                const int w = static_cast<int>(rng.uniform_index(static_cast<uint64_t>(n)));
                const auto cand = std::minmax(keep, w);
                if (w == keep || present.count({cand.first, cand.second})) continue;
                target = w;
                break;
            }
            const auto picked = std::minmax(keep, target);
            g.edges[e] = {picked.first, picked.second};
            present.insert(g.edges[e]);
        }
        g.canonicalize();
    }
    return out;
}

namespace {

std::vector<int> shuffled_clusters(const Clustering& clustering, Rng& rng) {
    std::vector<int> ids(clustering.exemplars.size());
    std::iota(ids.begin(), ids.end(), 0);
    rng.shuffle(ids);
    return ids;
}

}  // namespace

GraphSet perturb_mode_collapse(const GraphSet& s, const Clustering& clustering,
                               double t, Rng& rng) {
    if (clustering.assignment.size() != s.size())
        throw std::invalid_argument("clustering does not match set size");
    const int k = clustering.num_clusters();
    const std::vector<int> order = shuffled_clusters(clustering, rng);
    const int collapse = static_cast<int>(std::floor(t * k));
    std::vector<char> collapsed(k, 0);
    for (int i = 0; i < collapse && i < k; ++i) collapsed[order[i]] = 1;

    GraphSet out = s;
    for (size_t i = 0; i < s.size(); ++i) {
        const int c = clustering.assignment[i];
        if (collapsed[c]) out.graphs[i] = s.graphs[clustering.exemplars[c]];
    }
    return out;
}

GraphSet perturb_mode_drop(const GraphSet& s, const Clustering& clustering,
                           double t, Rng& rng) {
    if (clustering.assignment.size() != s.size())
        throw std::invalid_argument("clustering does not match set size");
    const int k = clustering.num_clusters();
    const std::vector<int> order = shuffled_clusters(clustering, rng);
    const int drop = static_cast<int>(std::floor(t * (k - 1)));
    std::vector<char> dropped(k, 0);
    for (int i = 0; i < drop && i < k - 1; ++i) dropped[order[i]] = 1;

    std::vector<int> pool;
    for (size_t i = 0; i < s.size(); ++i)
        if (!dropped[clustering.assignment[i]]) pool.push_back(static_cast<int>(i));

    GraphSet out = s;
    for (size_t i = 0; i < s.size(); ++i) {
        if (!dropped[clustering.assignment[i]]) continue;
        out.graphs[i] = s.graphs[pool[rng.uniform_index(pool.size())]];
    }
    return out;
}

namespace {

GraphSet perturb_feats(const GraphSet& s, double t, Rng& rng, bool nodes) {
    if (nodes && !s.schema.has_node())
        throw std::invalid_argument("set has no node features to perturb");
    if (!nodes && !s.schema.has_edge())
        throw std::invalid_argument("set has no edge features to perturb");
    const uint64_t cats = static_cast<uint64_t>(
        nodes ? s.schema.node_categories : s.schema.edge_categories);
    GraphSet out = s;
    for (Graph& g : out.graphs) {
        std::vector<int>& feats = nodes ? g.node_features : g.edge_features;
        for (int& f : feats)
            if (rng.bernoulli(t)) f = static_cast<int>(rng.uniform_index(cats));
    }
    return out;
}

}  // namespace

GraphSet perturb_node_feats(const GraphSet& s, double t, Rng& rng) {
    return perturb_feats(s, t, rng, true);
}

GraphSet perturb_edge_feats(const GraphSet& s, double t, Rng& rng) {
    return perturb_feats(s, t, rng, false);
}

}  // namespace ggm
