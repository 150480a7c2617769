#include "ggmeval/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ggm {

namespace {

// One graph's WL pattern counts per round, with label ids shared through a
// common dictionary so counts are comparable across graphs.
struct WlDict {
    std::map<std::pair<int, std::vector<int>>, int> ids;
    int next = 1;  // 0 is the uniform initial label

    int intern(int own, std::vector<int> neigh) {
        auto [it, inserted] = ids.try_emplace({own, std::move(neigh)}, next);
        if (inserted) ++next;
        return it->second;
    }
};

using Counts = std::unordered_map<int, long>;

std::vector<Counts> wl_counts(const Graph& g, int h, WlDict& dict) {
    std::vector<std::vector<int>> adj = adjacency(g);
    std::vector<int> label(g.num_nodes, 0);
    std::vector<Counts> rounds;
    rounds.reserve(h + 1);
    Counts c0;
    c0[0] = g.num_nodes;
    rounds.push_back(std::move(c0));
    for (int round = 1; round <= h; ++round) {
        std::vector<int> next(g.num_nodes);
        Counts c;
        for (int v = 0; v < g.num_nodes; ++v) {
            std::vector<int> neigh;
            neigh.reserve(adj[v].size());
            for (int u : adj[v]) neigh.push_back(label[u]);
            std::sort(neigh.begin(), neigh.end());
            next[v] = dict.intern(label[v], std::move(neigh));
            ++c[next[v]];
        }
        label = std::move(next);
        rounds.push_back(std::move(c));
    }
    return rounds;
}

double dot(const std::vector<Counts>& a, const std::vector<Counts>& b) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.size(); ++r)
        for (const auto& [lab, cnt] : a[r]) {
            auto it = b[r].find(lab);
            if (it != b[r].end()) s += static_cast<double>(cnt) * it->second;
        }
    return s;
}

}  // namespace

double wl_subtree_kernel(const Graph& g1, const Graph& g2, int h, bool normalized) {
    if (h < 0) throw std::invalid_argument("wl_subtree_kernel needs h >= 0");
    WlDict dict;
    auto c1 = wl_counts(g1, h, dict);
    auto c2 = wl_counts(g2, h, dict);
    double k12 = dot(c1, c2);
    if (!normalized) return k12;
    double k11 = dot(c1, c1), k22 = dot(c2, c2);
    return (k11 > 0 && k22 > 0) ? k12 / std::sqrt(k11 * k22) : 0.0;
}

Eigen::MatrixXd wl_kernel_matrix(const GraphSet& s, int h) {
    const std::size_t n = s.size();
    WlDict dict;
    std::vector<std::vector<Counts>> counts;
    counts.reserve(n);
    for (const Graph& g : s.graphs) counts.push_back(wl_counts(g, h, dict));
    Eigen::MatrixXd k(n, n);
    std::vector<double> self(n);
    for (std::size_t i = 0; i < n; ++i) self[i] = dot(counts[i], counts[i]);
    for (std::size_t i = 0; i < n; ++i) {
        k(i, i) = self[i] > 0 ? 1.0 : 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double v = (self[i] > 0 && self[j] > 0)
                           ? dot(counts[i], counts[j]) / std::sqrt(self[i] * self[j])
                           : 0.0;
            k(i, j) = k(j, i) = v;
        }
    }
    return k;
}

Clustering affinity_propagation(const Eigen::MatrixXd& similarity, double damping,
                                int max_iter, int stable_rounds) {
    const Eigen::Index n = similarity.rows();
    if (n == 0 || similarity.cols() != n)
        throw std::invalid_argument("affinity_propagation needs a square similarity matrix");
    if (n == 1) return {{0}, {0}, false};

    Eigen::MatrixXd s = similarity;
    std::vector<double> off;
    off.reserve(n * (n - 1));
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j) off.push_back(s(i, j));
    std::nth_element(off.begin(), off.begin() + off.size() / 2, off.end());
    double median = off[off.size() / 2];
    if (off.size() % 2 == 0) {
        double lower = *std::max_element(off.begin(), off.begin() + off.size() / 2);
        median = 0.5 * (median + lower);
    }
    s.diagonal().setConstant(median);

    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    std::vector<char> exemplar_now(n, 0), exemplar_prev(n, 0);
    int stable = 0;

    for (int iter = 0; iter < max_iter; ++iter) {
        // responsibilities: r(i,k) <- s(i,k) - max_{k' != k} (a(i,k') + s(i,k'))
        for (Eigen::Index i = 0; i < n; ++i) {
            double best = -std::numeric_limits<double>::infinity();
            double second = best;
            Eigen::Index best_k = -1;
            for (Eigen::Index k = 0; k < n; ++k) {
                double v = a(i, k) + s(i, k);
                if (v > best) {
                    second = best;
                    best = v;
                    best_k = k;
                } else if (v > second) {
                    second = v;
                }
            }
            for (Eigen::Index k = 0; k < n; ++k) {
                double cap = (k == best_k) ? second : best;
                r(i, k) = damping * r(i, k) + (1.0 - damping) * (s(i, k) - cap);
            }
        }
        // availabilities: a(i,k) <- min(0, r(k,k) + sum_{i' not in {i,k}} max(0, r(i',k)))
        for (Eigen::Index k = 0; k < n; ++k) {
            double pos_sum = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (i != k) pos_sum += std::max(0.0, r(i, k));
            for (Eigen::Index i = 0; i < n; ++i) {
                double v;
                if (i == k) {
                    v = pos_sum;
                } else {
                    v = r(k, k) + pos_sum - std::max(0.0, r(i, k));
                    v = std::min(0.0, v);
                }
                a(i, k) = damping * a(i, k) + (1.0 - damping) * v;
            }
        }
        for (Eigen::Index i = 0; i < n; ++i)
            exemplar_now[i] = (r(i, i) + a(i, i) > 0) ? 1 : 0;
        bool any = std::find(exemplar_now.begin(), exemplar_now.end(), 1) !=
                   exemplar_now.end();
        if (any && exemplar_now == exemplar_prev) {
            if (++stable >= stable_rounds) break;
        } else {
            stable = 0;
        }
        exemplar_prev = exemplar_now;
    }

    Clustering out;
    std::vector<Eigen::Index> ex;
    for (Eigen::Index i = 0; i < n; ++i)
        if (exemplar_now[i]) ex.push_back(i);
    if (ex.empty()) {
        // no exemplar converged; collapse to the best-connected point
        Eigen::Index best = 0;
        double best_total = -std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < n; ++k) {
            double total = similarity.col(k).sum();
            if (total > best_total) {
                best_total = total;
                best = k;
            }
        }
        out.fallback = true;
        out.exemplars = {static_cast<int>(best)};
        out.assignment.assign(n, 0);
        return out;
    }
    out.assignment.assign(n, 0);
    for (std::size_t c = 0; c < ex.size(); ++c) out.exemplars.push_back(static_cast<int>(ex[c]));
    for (Eigen::Index i = 0; i < n; ++i) {
        int best_c = 0;
        double best_s = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < ex.size(); ++c) {
            if (ex[c] == i) {  // exemplars stay in their own cluster
                best_c = static_cast<int>(c);
                break;
            }
            if (s(i, ex[c]) > best_s) {
                best_s = s(i, ex[c]);
                best_c = static_cast<int>(c);
            }
        }
        out.assignment[i] = best_c;
    }
    return out;
}

Clustering cluster_graphs(const GraphSet& s, int wl_iterations) {
    if (s.graphs.empty()) throw std::invalid_argument("cluster_graphs needs graphs");
    return affinity_propagation(wl_kernel_matrix(s, wl_iterations));
}

}  // namespace ggm
