#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "ggmeval/generators.hpp"
#include "ggmeval/graph.hpp"
#include "ggmeval/metrics_classic.hpp"
#include "ggmeval/rng.hpp"

using namespace ggm;

namespace {

Graph from_edges(int n, std::vector<std::pair<int, int>> edges) {
    Graph g;
    g.num_nodes = n;
    g.edges = std::move(edges);
    g.canonicalize();
    return g;
}

// Exhaustive induced-subgraph orbit counter: enumerate every 2-, 3- and
// 4-node subset, keep the connected ones, classify the isomorphism type by
// edge count and degree sequence, and attribute orbits by within-graphlet
// degree (which separates every orbit of these graphlets).
std::vector<std::array<std::int64_t, 15>> orbit_oracle(const Graph& g) {
    const int n = g.num_nodes;
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (auto [a, b] : g.edges) adj[a][b] = adj[b][a] = 1;
    std::vector<std::array<std::int64_t, 15>> orb(n, std::array<std::int64_t, 15>{});

    for (auto [a, b] : g.edges) {
        ++orb[a][0];
        ++orb[b][0];
    }

    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c) {
                int e = adj[a][b] + adj[a][c] + adj[b][c];
                if (e == 3) {
                    ++orb[a][3];
                    ++orb[b][3];
                    ++orb[c][3];
                } else if (e == 2) {
                    int mid = (adj[a][b] && adj[a][c]) ? a
                              : (adj[a][b] && adj[b][c]) ? b
                                                         : c;
                    for (int v : {a, b, c})
                        ++orb[v][v == mid ? 2 : 1];
                }
            }

    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            for (int c = b + 1; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    int vs[4] = {a, b, c, d};
                    int dg[4] = {0, 0, 0, 0};
                    int e = 0;
                    for (int i = 0; i < 4; ++i)
                        for (int j = i + 1; j < 4; ++j)
                            if (adj[vs[i]][vs[j]]) {
                                ++e;
                                ++dg[i];
                                ++dg[j];
                            }
                    int mindeg = *std::min_element(dg, dg + 4);
                    int maxdeg = *std::max_element(dg, dg + 4);
                    if (e < 3 || mindeg == 0) continue;  // disconnected
                    if (e == 3) {
                        if (maxdeg == 3)  // claw: leaves 6, center 7
                            for (int i = 0; i < 4; ++i)
                                ++orb[vs[i]][dg[i] == 3 ? 7 : 6];
                        else  // path: ends 4, middles 5
                            for (int i = 0; i < 4; ++i)
                                ++orb[vs[i]][dg[i] == 1 ? 4 : 5];
                    } else if (e == 4) {
                        if (maxdeg == 3)  // paw: tail 9, far pair 10, hub 11
                            for (int i = 0; i < 4; ++i)
                                ++orb[vs[i]][dg[i] == 1 ? 9 : dg[i] == 2 ? 10 : 11];
                        else  // cycle
                            for (int i = 0; i < 4; ++i) ++orb[vs[i]][8];
                    } else if (e == 5) {  // diamond: rim 12, spine 13
                        for (int i = 0; i < 4; ++i)
                            ++orb[vs[i]][dg[i] == 2 ? 12 : 13];
                    } else {  // complete
                        for (int i = 0; i < 4; ++i) ++orb[vs[i]][14];
                    }
                }
    return orb;
}

// Exact min-cost transport between integer bin masses with |i - j| ground
// cost, via successive shortest paths on the residual network.
double emd_flow_oracle(const std::vector<long>& c1, const std::vector<long>& c2) {
    const int n = static_cast<int>(c1.size()), m = static_cast<int>(c2.size());
    const int src = 0, snk = n + m + 1, nodes = n + m + 2;
    struct Arc {
        int to;
        long cap;
        double cost;
        int rev;
    };
    std::vector<std::vector<Arc>> g(nodes);
    auto add = [&](int a, int b, long cap, double cost) {
        g[a].push_back({b, cap, cost, static_cast<int>(g[b].size())});
        g[b].push_back({a, 0, -cost, static_cast<int>(g[a].size()) - 1});
    };
    long total = 0;
    for (int i = 0; i < n; ++i) {
        add(src, 1 + i, c1[i], 0.0);
        total += c1[i];
    }
    for (int j = 0; j < m; ++j) add(1 + n + j, snk, c2[j], 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j)
            add(1 + i, 1 + n + j, total, std::abs(i - j));

    double cost = 0.0;
    while (true) {
        // Bellman-Ford shortest path in the residual graph.
        std::vector<double> dist(nodes, 1e18);
        std::vector<int> pv(nodes, -1), pe(nodes, -1);
        dist[src] = 0.0;
        for (int it = 0; it < nodes; ++it)
            for (int v = 0; v < nodes; ++v) {
                if (dist[v] >= 1e18) continue;
                for (std::size_t k = 0; k < g[v].size(); ++k) {
                    const Arc& a = g[v][k];
                    if (a.cap > 0 && dist[v] + a.cost < dist[a.to] - 1e-12) {
                        dist[a.to] = dist[v] + a.cost;
                        pv[a.to] = v;
                        pe[a.to] = static_cast<int>(k);
                    }
                }
            }
        if (pv[snk] == -1) break;
        long push = total;
        for (int v = snk; v != src; v = pv[v])
            push = std::min(push, g[pv[v]][pe[v]].cap);
        for (int v = snk; v != src; v = pv[v]) {
            Arc& a = g[pv[v]][pe[v]];
            a.cap -= push;
            g[v][a.rev].cap += push;
            cost += push * a.cost;
        }
    }
    return cost / static_cast<double>(total);
}

Histogram normalized(const std::vector<long>& counts) {
    long total = std::accumulate(counts.begin(), counts.end(), 0L);
    Histogram h;
    for (long c : counts) h.w.push_back(static_cast<double>(c) / total);
    return h;
}

// Double-loop reimplementation of the descriptor MMD from its contract.
double classical_oracle(const GraphSet& a, const GraphSet& b, GraphStatistic stat) {
    double sigma = stat == GraphStatistic::degree       ? 1.0
                   : stat == GraphStatistic::clustering ? 0.1
                                                        : 30.0;
    auto dist = [&](const Graph& x, const Graph& y) {
        if (stat == GraphStatistic::orbit) {
            auto ox = orbit_counts(x), oy = orbit_counts(y);
            double s = 0.0;
            for (int i = 0; i < 15; ++i) s += (ox[i] - oy[i]) * (ox[i] - oy[i]);
            return std::sqrt(s);
        }
        auto hist = [&](const Graph& g) {
            return stat == GraphStatistic::degree ? degree_hist(g) : clustering_hist(g);
        };
        return emd_1d(hist(x), hist(y));
    };
    auto kmean = [&](const GraphSet& s1, const GraphSet& s2) {
        double acc = 0.0;
        for (const Graph& x : s1.graphs)
            for (const Graph& y : s2.graphs) {
                double d = dist(x, y);
                acc += std::exp(-d * d / (2.0 * sigma * sigma));
            }
        return acc / (static_cast<double>(s1.size()) * s2.size());
    };
    return kmean(a, a) + kmean(b, b) - 2.0 * kmean(a, b);
}

}  // namespace

TEST_CASE("degree histograms are normalized counts up to the max degree") {
    Graph c4 = from_edges(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    Histogram h = degree_hist(c4);
    REQUIRE(h.w.size() == 3);
    CHECK(h.w[0] == 0.0);
    CHECK(h.w[1] == 0.0);
    CHECK(h.w[2] == 1.0);

    Graph star = from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    Histogram hs = degree_hist(star);
    REQUIRE(hs.w.size() == 5);
    CHECK(hs.w[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(hs.w[4] == doctest::Approx(0.2).epsilon(1e-15));

    Graph lone;
    lone.num_nodes = 3;
    Histogram hl = degree_hist(lone);
    REQUIRE(hl.w.size() == 1);
    CHECK(hl.w[0] == 1.0);

    double sum = 0.0;
    for (double v : degree_hist(generate_grid(5, 7)).w) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("clustering histograms bin local coefficients") {
    Graph k3 = from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
    Histogram h = clustering_hist(k3);
    REQUIRE(h.w.size() == 100);
    CHECK(h.w[99] == 1.0);  // coefficient 1.0 lands in the last bin

    Graph p3 = from_edges(3, {{0, 1}, {1, 2}});
    Histogram hp = clustering_hist(p3);
    CHECK(hp.w[0] == 1.0);  // coefficients 0 everywhere

    // K4 minus one edge: two nodes see 2/3, two see 1.
    Graph diamond = from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}});
    Histogram hd = clustering_hist(diamond);
    CHECK(hd.w[66] == doctest::Approx(0.5).epsilon(1e-15));  // 2/3 -> bin 66
    CHECK(hd.w[99] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS((void)clustering_hist(k3, 0), std::invalid_argument);
}

TEST_CASE("orbit counts match hand values on the textbook graphs") {
    Graph k3 = from_edges(3, {{0, 1}, {0, 2}, {1, 2}});
    auto per_node = orbit_counts_per_node(k3);
    for (const auto& row : per_node) {
        CHECK(row[0] == 2);
        CHECK(row[1] == 0);
        CHECK(row[2] == 0);
        CHECK(row[3] == 1);
        for (int o = 4; o < 15; ++o) CHECK(row[o] == 0);
    }
    auto mean = orbit_counts(k3);
    CHECK(mean[0] == 2.0);
    CHECK(mean[3] == 1.0);

    Graph p4 = from_edges(4, {{0, 1}, {1, 2}, {2, 3}});
    auto p4_orb = orbit_counts_per_node(p4);
    CHECK(p4_orb[0][4] == 1);  // path end
    CHECK(p4_orb[3][4] == 1);
    CHECK(p4_orb[1][5] == 1);  // path middle
    CHECK(p4_orb[2][5] == 1);

    Graph lone;
    lone.num_nodes = 4;
    for (const auto& row : orbit_counts_per_node(lone))
        for (long long v : row) CHECK(v == 0);
}

TEST_CASE("orbit counts match the exhaustive induced-subgraph oracle") {
    std::vector<Graph> cases;
    cases.push_back(generate_grid(3, 3));
    cases.push_back(from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}}));
    cases.push_back(from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}));
    Rng rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        int n = 4 + static_cast<int>(rng.uniform_index(7));
        double p = 0.25 + 0.1 * static_cast<double>(rng.uniform_index(6));
        cases.push_back(generate_er(n, p, rng));
    }
    for (const Graph& g : cases) {
        auto got = orbit_counts_per_node(g);
        auto want = orbit_oracle(g);
        REQUIRE(got.size() == want.size());
        for (std::size_t v = 0; v < got.size(); ++v)
            for (int o = 0; o < 15; ++o) CHECK(got[v][o] == want[v][o]);
    }
}

TEST_CASE("1-d emd equals the min-cost transport") {
    Histogram a{{1.0, 0.0}}, b{{0.0, 1.0}};
    CHECK(emd_1d(a, b) == 1.0);
    CHECK(emd_1d(a, a) == 0.0);
    CHECK(emd_1d(b, b) == 0.0);

    // Different support lengths are zero-padded on the right.
    Histogram shorter{{1.0}};
    CHECK(emd_1d(shorter, b) == 1.0);
    CHECK(emd_1d(b, shorter) == 1.0);

    Rng rng(15);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<long> c1(6), c2(6);
        long t1 = 0, t2 = 0;
        for (int i = 0; i < 6; ++i) {
            c1[i] = static_cast<long>(rng.uniform_index(20));
            c2[i] = static_cast<long>(rng.uniform_index(20));
            t1 += c1[i];
            t2 += c2[i];
        }
        if (t1 == 0) c1[0] = t1 = 1;
        if (t2 == 0) c2[0] = t2 = 1;
        double got = emd_1d(normalized(c1), normalized(c2));
        // Scale one side so both integer masses agree (costs scale linearly).
        std::vector<long> s1(6), s2(6);
        for (int i = 0; i < 6; ++i) {
            s1[i] = c1[i] * t2;
            s2[i] = c2[i] * t1;
        }
        double want = emd_flow_oracle(s1, s2);
        CHECK(std::abs(got - want) <= 1e-9);
    }

    // Triangle inequality.
    for (int rep = 0; rep < 50; ++rep) {
        auto rand_hist = [&rng]() {
            std::vector<long> c(5);
            for (long& v : c) v = static_cast<long>(rng.uniform_index(10)) + 1;
            return normalized(c);
        };
        Histogram x = rand_hist(), y = rand_hist(), z = rand_hist();
        CHECK(emd_1d(x, z) <= emd_1d(x, y) + emd_1d(y, z) + 1e-9);
    }
}

TEST_CASE("classical mmds vanish on identical or statistic-equal sets") {
    Rng rng(42);
    GraphSet s = sample_grid_set(20, rng);
    for (GraphStatistic stat :
         {GraphStatistic::degree, GraphStatistic::clustering, GraphStatistic::orbit})
        CHECK(std::abs(classical_mmd(s, s, stat).raw) <= 1e-9);

    // Grids are triangle-free, so any two grid sets tie on clustering.
    GraphSet a, b;
    a.graphs.assign(s.graphs.begin(), s.graphs.begin() + 10);
    b.graphs.assign(s.graphs.begin() + 10, s.graphs.end());
    CHECK(classical_mmd(a, b, GraphStatistic::clustering).raw == 0.0);

    GraphSet empty;
    CHECK_THROWS_AS((void)classical_mmd(empty, s, GraphStatistic::degree),
                    std::invalid_argument);
}

TEST_CASE("classical mmds match the double-loop kernel oracle") {
    Rng rng(55);
    GraphSet a, b;
    a.graphs = {generate_grid(3, 4), generate_er(12, 0.4, rng),
                from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}})};
    b.graphs = {generate_er(10, 0.3, rng), generate_er(14, 0.6, rng),
                from_edges(3, {{0, 1}, {0, 2}, {1, 2}})};
    for (GraphStatistic stat :
         {GraphStatistic::degree, GraphStatistic::clustering, GraphStatistic::orbit}) {
        double got = classical_mmd(a, b, stat).raw;
        double want = classical_oracle(a, b, stat);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
        CHECK(got >= -1e-9);
    }
    CHECK(classical_mmd(a, b, GraphStatistic::degree).metric_id == "degree_mmd");
    CHECK(classical_mmd(a, b, GraphStatistic::clustering).metric_id ==
          "clustering_mmd");
    CHECK(classical_mmd(a, b, GraphStatistic::orbit).metric_id == "orbit_mmd");
}

TEST_CASE("classical mmds are invariant to node relabeling and set order") {
    Rng rng(66);
    GraphSet a, b;
    for (int i = 0; i < 6; ++i) a.graphs.push_back(generate_er(10, 0.35, rng));
    for (int i = 0; i < 5; ++i) b.graphs.push_back(generate_er(10, 0.5, rng));

    GraphSet a_rel = a;
    for (Graph& g : a_rel.graphs) {
        std::vector<int> perm(g.num_nodes);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        Graph out;
        out.num_nodes = g.num_nodes;
        for (auto [x, y] : g.edges) {
            int na = perm[x], nb = perm[y];
            out.edges.emplace_back(std::min(na, nb), std::max(na, nb));
        }
        out.canonicalize();
        g = out;
    }
    for (GraphStatistic stat :
         {GraphStatistic::degree, GraphStatistic::clustering, GraphStatistic::orbit}) {
        CHECK(classical_mmd(a, b, stat).raw ==
              doctest::Approx(classical_mmd(a_rel, b, stat).raw).epsilon(1e-12));
        // Symmetric in its two set arguments.
        CHECK(classical_mmd(a, b, stat).raw ==
              doctest::Approx(classical_mmd(b, a, stat).raw).epsilon(1e-12));
    }
}
