#include "ggmeval/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

namespace ggm {

Graph generate_grid(int rows, int cols) {
    if (rows < 1 || cols < 1) throw std::invalid_argument("grid dimensions must be >= 1");
    Graph g;
    g.num_nodes = rows * cols;
    auto id = [cols](int r, int c) { return r * cols + c; };
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            if (c + 1 < cols) g.edges.emplace_back(id(r, c), id(r, c + 1));
            if (r + 1 < rows) g.edges.emplace_back(id(r, c), id(r + 1, c));
        }
    g.canonicalize();
    return g;
}

Graph generate_lobster(int expected_backbone, double p1, double p2, Rng& rng) {
    if (p1 < 0 || p1 > 1 || p2 < 0 || p2 > 1)
        throw std::invalid_argument("leg probabilities must be in [0,1]");
    int backbone = static_cast<int>(2.0 * rng.uniform() * expected_backbone + 0.5);
    backbone = std::max(backbone, 1);
    Graph g;
    g.num_nodes = backbone;
    for (int i = 0; i + 1 < backbone; ++i) g.edges.emplace_back(i, i + 1);
    for (int i = 0; i < backbone; ++i) {
        if (rng.bernoulli(p1)) {
            int leg = g.num_nodes++;
            g.edges.emplace_back(i, leg);
            if (rng.bernoulli(p2)) {
                int leg2 = g.num_nodes++;
                g.edges.emplace_back(leg, leg2);
            }
        }
    }
    g.canonicalize();
    return g;
}

Graph generate_community(int num_nodes, Rng& rng) {
    if (num_nodes < 4 || num_nodes % 2 != 0)
        throw std::invalid_argument("community graph needs an even node count >= 4");
    const int half = num_nodes / 2;
    Graph g;
    g.num_nodes = num_nodes;
    for (int block = 0; block < 2; ++block) {
        int base = block * half;
        for (int i = 0; i < half; ++i)
            for (int j = i + 1; j < half; ++j)
                if (rng.bernoulli(0.3)) g.edges.emplace_back(base + i, base + j);
    }
    int inter = static_cast<int>(std::lround(0.05 * num_nodes));
    std::set<std::pair<int, int>> chosen;
    while (static_cast<int>(chosen.size()) < inter) {
        int a = static_cast<int>(rng.uniform_index(half));
        int b = half + static_cast<int>(rng.uniform_index(half));
        chosen.insert({a, b});
    }
    for (auto& e : chosen) g.edges.push_back(e);
    g.canonicalize();
    return g;
}

Graph generate_er(int n, double p, Rng& rng) {
    if (n < 0 || p < 0 || p > 1) throw std::invalid_argument("bad E-R parameters");
    Graph g;
    g.num_nodes = n;
    if (p >= 1.0) {
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.edges.emplace_back(i, j);
        return g;
    }
    if (p > 0.0) {
        // geometric skips between successive edges instead of a Bernoulli
        // draw per pair, so sparse graphs cost O(|E|) rather than O(|V|^2)
        const double log_q = std::log1p(-p);
        std::int64_t v = 1, w = -1;
        while (v < n) {
            const double r = rng.uniform();
            w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
            while (w >= v && v < n) {
                w -= v;
                ++v;
            }
            if (v < n) g.edges.emplace_back(static_cast<int>(w), static_cast<int>(v));
        }
        g.canonicalize();
    }
    return g;
}

Graph er_twin(const Graph& g, Rng& rng, bool count_both_directions) {
    if (g.num_nodes == 0) throw std::invalid_argument("er_twin needs a nonempty graph");
    double e = static_cast<double>(g.edges.size()) * (count_both_directions ? 2.0 : 1.0);
    double p = e / (static_cast<double>(g.num_nodes) * g.num_nodes);
    return generate_er(g.num_nodes, std::min(p, 1.0), rng);
}

GraphSet sample_grid_set(int count, Rng& rng) {
    GraphSet s;
    for (int i = 0; i < count; ++i) {
        int rows = static_cast<int>(rng.uniform_int(10, 20));
        int cols = static_cast<int>(rng.uniform_int(10, 20));
        s.graphs.push_back(generate_grid(rows, cols));
    }
    return s;
}

GraphSet sample_lobster_set(int count, Rng& rng) {
    GraphSet s;
    while (static_cast<int>(s.graphs.size()) < count) {
        Graph g = generate_lobster(40, 0.7, 0.7, rng);
        if (g.num_nodes >= 10 && g.num_nodes <= 100) s.graphs.push_back(std::move(g));
    }
    return s;
}

GraphSet sample_community_set(int count, Rng& rng) {
    GraphSet s;
    for (int i = 0; i < count; ++i) {
        int n = 60 + 2 * static_cast<int>(rng.uniform_index(51));  // even in [60, 160]
        s.graphs.push_back(generate_community(n, rng));
    }
    return s;
}

GraphSet sample_er_set(int count, int n, double p, Rng& rng) {
    GraphSet s;
    for (int i = 0; i < count; ++i) s.graphs.push_back(generate_er(n, p, rng));
    return s;
}

namespace {

// Geometric category weights w_k ∝ 0.3^k, returned as cumulative thresholds.
std::vector<double> skewed_cdf(int categories) {
    std::vector<double> cdf(categories);
    double total = 0.0, w = 1.0;
    for (int k = 0; k < categories; ++k, w *= 0.3) total += w;
    double acc = 0.0;
    w = 1.0;
    for (int k = 0; k < categories; ++k, w *= 0.3) {
        acc += w / total;
        cdf[k] = acc;
    }
    cdf.back() = 1.0;
    return cdf;
}

int draw_category(const std::vector<double>& cdf, Rng& rng) {
    const double u = rng.uniform();
    for (std::size_t k = 0; k < cdf.size(); ++k)
        if (u < cdf[k]) return static_cast<int>(k);
    return static_cast<int>(cdf.size()) - 1;
}

}  // namespace

void assign_random_features(GraphSet& s, int node_categories, int edge_categories,
                            Rng& rng) {
    const std::vector<double> node_cdf =
        node_categories > 0 ? skewed_cdf(node_categories) : std::vector<double>{};
    const std::vector<double> edge_cdf =
        edge_categories > 0 ? skewed_cdf(edge_categories) : std::vector<double>{};
    for (Graph& g : s.graphs) {
        if (node_categories > 0) {
            g.node_features.resize(g.num_nodes);
            for (int& f : g.node_features) f = draw_category(node_cdf, rng);
        }
        if (edge_categories > 0) {
            g.edge_features.resize(g.edges.size());
            for (int& f : g.edge_features) f = draw_category(edge_cdf, rng);
        }
    }
    s.schema.node_categories = std::max(s.schema.node_categories, node_categories);
    s.schema.edge_categories = std::max(s.schema.edge_categories, edge_categories);
}

}  // namespace ggm
