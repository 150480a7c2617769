#include "ggmeval/metrics_classic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ggmeval/parallel.hpp"

namespace ggm {

Histogram degree_hist(const Graph& g) {
    if (g.num_nodes == 0) return {{1.0}};
    std::vector<int> deg = degrees(g);
    int max_deg = *std::max_element(deg.begin(), deg.end());
    Histogram h;
    h.w.assign(max_deg + 1, 0.0);
    for (int d : deg) h.w[d] += 1.0;
    for (double& v : h.w) v /= g.num_nodes;
    return h;
}

Histogram clustering_hist(const Graph& g, int bins) {
    if (bins < 1) throw std::invalid_argument("clustering_hist needs bins >= 1");
    Histogram h;
    h.w.assign(bins, 0.0);
    if (g.num_nodes == 0) {
        h.w[0] = 1.0;
        return h;
    }
    std::vector<std::vector<int>> adj = adjacency(g);
    for (int v = 0; v < g.num_nodes; ++v) {
        double c = 0.0;
        int d = static_cast<int>(adj[v].size());
        if (d >= 2) {
            long links = 0;
            for (std::size_t i = 0; i < adj[v].size(); ++i)
                for (std::size_t j = i + 1; j < adj[v].size(); ++j)
                    if (std::binary_search(adj[adj[v][j]].begin(), adj[adj[v][j]].end(),
                                           adj[v][i]))
                        ++links;
            c = 2.0 * static_cast<double>(links) / (static_cast<double>(d) * (d - 1));
        }
        int bin = std::min(static_cast<int>(c * bins), bins - 1);
        h.w[bin] += 1.0;
    }
    for (double& v : h.w) v /= g.num_nodes;
    return h;
}

namespace {

// Combinatorial 4-node orbit counting: per-edge triangle counts, direct
// enumeration of small patterns, complete graphlets via common-neighbor
// pairs, then the remaining orbits from a linear system over the per-node
// accumulators. Runs in O(sum over edges of deg) plus the C4 enumeration.
struct OrbitCounter {
    const Graph& g;
    std::vector<std::vector<int>> nbr, eid;
    std::vector<int> deg;
    std::vector<std::uint64_t> bits;  // adjacency bitset when memory allows
    bool use_bits = false;
    int n = 0;

    explicit OrbitCounter(const Graph& graph) : g(graph), n(graph.num_nodes) {
        adjacency_with_edges(g, nbr, eid);
        deg.resize(n);
        for (int v = 0; v < n; ++v) deg[v] = static_cast<int>(nbr[v].size());
        if (static_cast<std::int64_t>(n) * n <= (1LL << 26)) {
            use_bits = true;
            bits.assign((static_cast<std::size_t>(n) * n + 63) / 64, 0);
            for (auto [a, b] : g.edges) {
                set_bit(static_cast<std::size_t>(a) * n + b);
                set_bit(static_cast<std::size_t>(b) * n + a);
            }
        }
    }

    void set_bit(std::size_t i) { bits[i >> 6] |= (1ULL << (i & 63)); }

    bool adjacent(int x, int y) const {
        if (use_bits) {
            std::size_t i = static_cast<std::size_t>(x) * n + y;
            return bits[i >> 6] & (1ULL << (i & 63));
        }
        return std::binary_search(nbr[x].begin(), nbr[x].end(), y);
    }

    std::vector<std::array<std::int64_t, 15>> run() const {
        std::vector<std::array<std::int64_t, 15>> orbit(
            n, std::array<std::int64_t, 15>{});
        const std::size_t m = g.edges.size();

        // triangles over each edge
        std::vector<int> tri(m, 0);
        for (std::size_t e = 0; e < m; ++e) {
            auto [x, y] = g.edges[e];
            std::size_t xi = 0, yi = 0;
            while (xi < nbr[x].size() && yi < nbr[y].size()) {
                if (nbr[x][xi] == nbr[y][yi]) {
                    ++tri[e];
                    ++xi;
                    ++yi;
                } else if (nbr[x][xi] < nbr[y][yi]) {
                    ++xi;
                } else {
                    ++yi;
                }
            }
        }

        // complete 4-node graphlets via ordered common-neighbor pairs
        std::vector<std::int64_t> c4(n, 0);
        std::vector<int> neigh(n);
        for (int x = 0; x < n; ++x) {
            for (int y : nbr[x]) {
                if (y >= x) break;
                int nn = 0;
                for (int z : nbr[y]) {
                    if (z >= y) break;
                    if (adjacent(x, z)) neigh[nn++] = z;
                }
                for (int i = 0; i < nn; ++i)
                    for (int j = i + 1; j < nn; ++j)
                        if (adjacent(neigh[i], neigh[j])) {
                            ++c4[x];
                            ++c4[y];
                            ++c4[neigh[i]];
                            ++c4[neigh[j]];
                        }
            }
        }

        std::vector<std::int64_t> common(n, 0);
        std::vector<int> common_list(n);
        int nc = 0;
        for (int x = 0; x < n; ++x) {
            std::int64_t f_12_14 = 0, f_10_13 = 0, f_13_14 = 0, f_11_13 = 0;
            std::int64_t f_7_11 = 0, f_5_8 = 0, f_6_9 = 0, f_9_12 = 0;
            std::int64_t f_4_8 = 0, f_8_12 = 0;
            const std::int64_t f_14 = c4[x];

            for (int i = 0; i < nc; ++i) common[common_list[i]] = 0;
            nc = 0;

            orbit[x][0] = deg[x];
            // x in the middle
            for (std::size_t nx1 = 0; nx1 < nbr[x].size(); ++nx1) {
                int y = nbr[x][nx1], ey = eid[x][nx1];
                for (std::size_t ny = 0; ny < nbr[y].size(); ++ny) {
                    int z = nbr[y][ny], ez = eid[y][ny];
                    if (adjacent(x, z)) {
                        if (z < y) {
                            f_12_14 += tri[ez] - 1;
                            f_10_13 += (deg[y] - 1 - tri[ez]) + (deg[z] - 1 - tri[ez]);
                        }
                    } else {
                        if (common[z] == 0) common_list[nc++] = z;
                        ++common[z];
                    }
                }
                for (std::size_t nx2 = nx1 + 1; nx2 < nbr[x].size(); ++nx2) {
                    int z = nbr[x][nx2], ez = eid[x][nx2];
                    if (adjacent(y, z)) {
                        ++orbit[x][3];
                        f_13_14 += (tri[ey] - 1) + (tri[ez] - 1);
                        f_11_13 += (deg[x] - 1 - tri[ey]) + (deg[x] - 1 - tri[ez]);
                    } else {
                        ++orbit[x][2];
                        f_7_11 += (deg[x] - 2 - tri[ey]) + (deg[x] - 2 - tri[ez]);
                        f_5_8 += (deg[y] - 1 - tri[ey]) + (deg[z] - 1 - tri[ez]);
                    }
                }
            }
            // x on the side
            for (std::size_t nx1 = 0; nx1 < nbr[x].size(); ++nx1) {
                int y = nbr[x][nx1], ey = eid[x][nx1];
                for (std::size_t ny = 0; ny < nbr[y].size(); ++ny) {
                    int z = nbr[y][ny], ez = eid[y][ny];
                    if (x == z) continue;
                    if (!adjacent(x, z)) {
                        ++orbit[x][1];
                        f_6_9 += deg[y] - 2 - tri[ey];
                        f_9_12 += tri[ez];
                        f_4_8 += deg[z] - 1 - tri[ez];
                        f_8_12 += common[z] - 1;
                    }
                }
            }

            orbit[x][14] = f_14;
            orbit[x][13] = (f_13_14 - 6 * f_14) / 2;
            orbit[x][12] = f_12_14 - 3 * f_14;
            orbit[x][11] = (f_11_13 - f_13_14 + 6 * f_14) / 2;
            orbit[x][10] = f_10_13 - f_13_14 + 6 * f_14;
            orbit[x][9] = (f_9_12 - 2 * f_12_14 + 6 * f_14) / 2;
            orbit[x][8] = (f_8_12 - 2 * f_12_14 + 6 * f_14) / 2;
            orbit[x][7] = (f_13_14 + f_7_11 - f_11_13 - 6 * f_14) / 6;
            orbit[x][6] = (2 * f_12_14 + f_6_9 - f_9_12 - 6 * f_14) / 2;
            orbit[x][5] = 2 * f_12_14 + f_5_8 - f_8_12 - 6 * f_14;
            orbit[x][4] = 2 * f_12_14 + f_4_8 - f_8_12 - 6 * f_14;
        }
        return orbit;
    }
};

}  // namespace

std::vector<std::array<std::int64_t, 15>> orbit_counts_per_node(const Graph& g) {
    return OrbitCounter(g).run();
}

std::array<double, 15> orbit_counts(const Graph& g) {
    std::array<double, 15> mean{};
    if (g.num_nodes == 0) return mean;
    auto per_node = orbit_counts_per_node(g);
    for (const auto& row : per_node)
        for (int o = 0; o < 15; ++o) mean[o] += static_cast<double>(row[o]);
    for (int o = 0; o < 15; ++o) mean[o] /= g.num_nodes;
    return mean;
}

double emd_1d(const Histogram& h1, const Histogram& h2) {
    const std::size_t n = std::max(h1.w.size(), h2.w.size());
    double cdf1 = 0.0, cdf2 = 0.0, emd = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cdf1 += i < h1.w.size() ? h1.w[i] : 0.0;
        cdf2 += i < h2.w.size() ? h2.w[i] : 0.0;
        emd += std::abs(cdf1 - cdf2);
    }
    return emd;
}

namespace {

struct Descriptors {
    std::vector<Histogram> hists;                 // degree / clustering
    std::vector<std::array<double, 15>> orbits;   // orbit
};

Descriptors extract(const GraphSet& s, GraphStatistic stat) {
    Descriptors d;
    if (stat == GraphStatistic::orbit) {
        d.orbits.resize(s.size());
        parallel_for(s.size(), [&](std::size_t i) { d.orbits[i] = orbit_counts(s.graphs[i]); });
    } else {
        d.hists.resize(s.size());
        parallel_for(s.size(), [&](std::size_t i) {
            d.hists[i] = stat == GraphStatistic::degree ? degree_hist(s.graphs[i])
                                                        : clustering_hist(s.graphs[i]);
        });
    }
    return d;
}

double gaussian(double dist, double sigma, bool squared) {
    double d = squared ? dist * dist : dist;
    return std::exp(-d / (2.0 * sigma * sigma));
}

double orbit_distance(const std::array<double, 15>& a, const std::array<double, 15>& b) {
    double s = 0.0;
    for (int i = 0; i < 15; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

double kernel_mean(const Descriptors& a, const Descriptors& b, GraphStatistic stat,
                   double sigma, bool squared) {
    const std::size_t n = stat == GraphStatistic::orbit ? a.orbits.size() : a.hists.size();
    const std::size_t m = stat == GraphStatistic::orbit ? b.orbits.size() : b.hists.size();
    std::vector<double> row_sums(n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            double dist = stat == GraphStatistic::orbit
                              ? orbit_distance(a.orbits[i], b.orbits[j])
                              : emd_1d(a.hists[i], b.hists[j]);
            acc += gaussian(dist, sigma, squared);
        }
        row_sums[i] = acc;
    });
    double total = 0.0;
    for (double v : row_sums) total += v;
    return total / (static_cast<double>(n) * static_cast<double>(m));
}

}  // namespace

MetricScore classical_mmd(const GraphSet& sr, const GraphSet& sg, GraphStatistic stat,
                          bool squared_distance) {
    if (sr.graphs.empty() || sg.graphs.empty())
        throw std::invalid_argument("classical_mmd needs nonempty sets");
    double sigma = stat == GraphStatistic::degree      ? 1.0
                   : stat == GraphStatistic::clustering ? 0.1
                                                         : 30.0;
    Descriptors dr = extract(sr, stat);
    Descriptors dg = extract(sg, stat);
    double v = kernel_mean(dr, dr, stat, sigma, squared_distance) +
               kernel_mean(dg, dg, stat, sigma, squared_distance) -
               2.0 * kernel_mean(dr, dg, stat, sigma, squared_distance);
    const char* id = stat == GraphStatistic::degree      ? "degree_mmd"
                     : stat == GraphStatistic::clustering ? "clustering_mmd"
                                                           : "orbit_mmd";
    return {id, v, to_dissimilarity(id, v)};
}

}  // namespace ggm
