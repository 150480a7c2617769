#include "ggmeval/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ggmeval/cluster.hpp"
#include "ggmeval/generators.hpp"
#include "ggmeval/metrics_classic.hpp"
#include "ggmeval/perturb.hpp"

namespace ggm {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double elapsed() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void charge(std::map<std::string, double>* seconds, const std::string& key, double v) {
    if (seconds) (*seconds)[key] += v;
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && xs[idx[j]] == xs[idx[i]]) ++j;
        const double mean_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = mean_rank;
        i = j;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size())
        throw std::invalid_argument("spearman: length mismatch");
    if (xs.size() < 2) throw std::invalid_argument("spearman: need at least 2 points");
    const std::vector<double> rx = average_ranks(xs);
    const std::vector<double> ry = average_ranks(ys);
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx, dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

PerturbKind parse_perturb(const std::string& name) {
    if (name == "mix") return PerturbKind::mix;
    if (name == "rewire") return PerturbKind::rewire;
    if (name == "mode_collapse") return PerturbKind::mode_collapse;
    if (name == "mode_drop") return PerturbKind::mode_drop;
    if (name == "node_feats") return PerturbKind::node_feats;
    if (name == "edge_feats") return PerturbKind::edge_feats;
    throw std::invalid_argument("unknown perturbation: " + name);
}

std::string perturb_name(PerturbKind kind) {
    switch (kind) {
        case PerturbKind::mix: return "mix";
        case PerturbKind::rewire: return "rewire";
        case PerturbKind::mode_collapse: return "mode_collapse";
        case PerturbKind::mode_drop: return "mode_drop";
        case PerturbKind::node_feats: return "node_feats";
        case PerturbKind::edge_feats: return "edge_feats";
    }
    throw std::invalid_argument("unknown perturbation kind");
}

const std::vector<std::string>& dataset_families() {
    static const std::vector<std::string> families = {
        "grid", "lobster", "community", "community-labeled", "er"};
    return families;
}

GraphSet sample_dataset(const std::string& family, int count, Rng& rng) {
    if (count < 1) throw std::invalid_argument("dataset size must be positive");
    if (family == "grid") return sample_grid_set(count, rng);
    if (family == "lobster") return sample_lobster_set(count, rng);
    if (family == "community") return sample_community_set(count, rng);
    if (family == "community-labeled") {
        GraphSet s = sample_community_set(count, rng);
        assign_random_features(s, 4, 3, rng);
        return s;
    }
    if (family == "er") return sample_er_set(count, 50, 0.01, rng);
    throw std::invalid_argument("unknown dataset family: " + family);
}

const std::vector<std::string>& nn_metric_ids() {
    static const std::vector<std::string> ids = {
        "fd",        "kid",    "mmd_linear", "mmd_rbf", "precision",
        "recall",    "f1_pr",  "density",    "coverage", "f1_dc"};
    return ids;
}

const std::vector<std::string>& classical_metric_ids() {
    static const std::vector<std::string> ids = {"degree_mmd", "clustering_mmd",
                                                 "orbit_mmd"};
    return ids;
}

const std::vector<std::string>& all_metric_ids() {
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v = nn_metric_ids();
        const auto& c = classical_metric_ids();
        v.insert(v.end(), c.begin(), c.end());
        return v;
    }();
    return ids;
}

bool is_nn_metric(const std::string& id) {
    const auto& ids = nn_metric_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

bool is_classical_metric(const std::string& id) {
    const auto& ids = classical_metric_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
}

namespace {

void validate_metric_ids(const std::vector<std::string>& ids) {
    for (const auto& id : ids)
        if (!is_nn_metric(id) && !is_classical_metric(id))
            throw std::invalid_argument("unknown metric: " + id);
}

// Filters `ids` down to one kind, in registry order, deduplicated.
std::vector<std::string> registry_filter(const std::vector<std::string>& ids, bool nn) {
    std::vector<std::string> out;
    for (const auto& id : nn ? nn_metric_ids() : classical_metric_ids())
        if (std::find(ids.begin(), ids.end(), id) != ids.end()) out.push_back(id);
    return out;
}

MetricScore make_score(const std::string& id, double raw) {
    return MetricScore{id, raw, to_dissimilarity(id, raw)};
}

FeatureSchema unify_schemas(const FeatureSchema& a, const FeatureSchema& b) {
    if (a.has_node() != b.has_node() || a.has_edge() != b.has_edge())
        throw std::invalid_argument(
            "feature schema mismatch: one set is labeled where the other is not");
    FeatureSchema u;
    u.node_categories = std::max(a.node_categories, b.node_categories);
    u.edge_categories = std::max(a.edge_categories, b.edge_categories);
    return u;
}

}  // namespace

std::vector<MetricScore> evaluate_embedding_metrics(
    const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg,
    const std::vector<std::string>& ids, int prdc_k,
    std::map<std::string, double>* seconds) {
    validate_metric_ids(ids);
    const std::vector<std::string> wanted = registry_filter(ids, true);
    std::vector<MetricScore> out;
    std::optional<Prdc> knn;
    const auto get_knn = [&]() -> const Prdc& {
        if (!knn) {
            Timer t;
            // Neighborhood metrics get standardized coordinates (see
            // standardize_pair); moment- and kernel-based metrics handle
            // scale themselves and stay on the raw embeddings. Each manifold
            // is estimated in the coordinates of the set that owns it, so
            // recall (generated manifold) comes from the role-swapped call.
            // This keeps the swap symmetry recall(r, g) == precision(g, r).
            const auto [zr, zg] = standardize_pair(xr, xg);
            knn = prdc(zr, zg, prdc_k);
            const auto [wg, wr] = standardize_pair(xg, xr);
            knn->recall = prdc(wg, wr, prdc_k).precision;
            charge(seconds, "prdc", t.elapsed());
        }
        return *knn;
    };
    for (const auto& id : wanted) {
        if (id == "fd") {
            Timer t;
            out.push_back(frechet_distance(xr, xg));
            charge(seconds, id, t.elapsed());
        } else if (id == "kid") {
            Timer t;
            out.push_back(kid(xr, xg));
            charge(seconds, id, t.elapsed());
        } else if (id == "mmd_linear") {
            Timer t;
            out.push_back(mmd_linear(xr, xg));
            charge(seconds, id, t.elapsed());
        } else if (id == "mmd_rbf") {
            Timer t;
            out.push_back(mmd_rbf(xr, xg));
            charge(seconds, id, t.elapsed());
        } else if (id == "precision") {
            out.push_back(make_score(id, get_knn().precision));
        } else if (id == "recall") {
            out.push_back(make_score(id, get_knn().recall));
        } else if (id == "f1_pr") {
            out.push_back(make_score(id, f1(get_knn().precision, get_knn().recall)));
        } else if (id == "density") {
            out.push_back(make_score(id, get_knn().density));
        } else if (id == "coverage") {
            out.push_back(make_score(id, get_knn().coverage));
        } else if (id == "f1_dc") {
            out.push_back(make_score(id, f1(get_knn().density, get_knn().coverage)));
        }
    }
    return out;
}

std::vector<MetricScore> evaluate_classical_metrics(
    const GraphSet& sr, const GraphSet& sg, const std::vector<std::string>& ids,
    std::map<std::string, double>* seconds) {
    validate_metric_ids(ids);
    std::vector<MetricScore> out;
    for (const auto& id : registry_filter(ids, false)) {
        const GraphStatistic stat = id == "degree_mmd"       ? GraphStatistic::degree
                                    : id == "clustering_mmd" ? GraphStatistic::clustering
                                                             : GraphStatistic::orbit;
        Timer t;
        out.push_back(classical_mmd(sr, sg, stat));
        charge(seconds, id, t.elapsed());
    }
    return out;
}

TimedScores evaluate_metrics(const GraphSet& sr, const GraphSet& sg,
                             const MetricOptions& opt) {
    const std::vector<std::string> ids =
        opt.metrics.empty() ? all_metric_ids() : opt.metrics;
    validate_metric_ids(ids);
    TimedScores result;
    if (!registry_filter(ids, true).empty()) {
        Timer t;
        const FeatureSchema schema = unify_schemas(sr.schema, sg.schema);
        const GinWeights weights = init_weights(opt.gin, schema);
        const Eigen::MatrixXd xr = embed_set(sr, weights, opt.gin);
        const Eigen::MatrixXd xg = embed_set(sg, weights, opt.gin);
        result.embed_seconds = t.elapsed();
        result.scores = evaluate_embedding_metrics(xr, xg, ids, opt.prdc_k,
                                                   &result.metric_seconds);
    }
    std::vector<MetricScore> classic =
        evaluate_classical_metrics(sr, sg, ids, &result.metric_seconds);
    result.scores.insert(result.scores.end(), classic.begin(), classic.end());
    return result;
}

std::vector<double> default_t_grid() {
    std::vector<double> ts(11);
    for (int i = 0; i <= 10; ++i) ts[i] = 0.1 * i;
    return ts;
}

ExperimentReport run_rank_experiment(const RankExperimentSpec& spec) {
    const std::vector<double> ts = spec.t_grid.empty() ? default_t_grid() : spec.t_grid;
    if (ts.size() < 2) throw std::invalid_argument("t grid needs at least two steps");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (ts[i] < 0.0 || ts[i] > 1.0)
            throw std::invalid_argument("perturbation degree must lie in [0,1]");
        if (i > 0 && ts[i] <= ts[i - 1])
            throw std::invalid_argument("t grid must be strictly increasing");
    }
    if (spec.num_samples < 2) throw std::invalid_argument("need at least 2 samples");
    if (spec.num_seeds < 1) throw std::invalid_argument("need at least 1 seed");
    const std::vector<std::string> ids =
        spec.metrics.empty() ? all_metric_ids() : spec.metrics;
    validate_metric_ids(ids);
    const std::vector<std::string> nn_ids = registry_filter(ids, true);
    const std::vector<std::string> cl_ids = registry_filter(ids, false);
    const std::vector<GinConfig> configs =
        spec.gin_configs.empty() ? std::vector<GinConfig>{GinConfig{}} : spec.gin_configs;
    const bool needs_cluster = spec.perturb == PerturbKind::mode_collapse ||
                               spec.perturb == PerturbKind::mode_drop;

    // Row keys in output order: embedding metrics per config, then the
    // config-independent graph-statistic metrics.
    std::vector<std::pair<std::string, std::string>> keys;
    if (!spec.value_override) {
        for (const auto& cfg : configs)
            for (const auto& id : nn_ids) keys.emplace_back(id, config_id(cfg));
        for (const auto& id : cl_ids) keys.emplace_back(id, "-");
    } else {
        for (const auto& id : ids) keys.emplace_back(id, "-");
    }

    ExperimentReport report;
    std::vector<std::vector<double>> rho(keys.size());

    for (int trial = 0; trial < spec.num_seeds; ++trial) {
        const std::uint64_t trial_seed = derive_seed(spec.seed, trial);
        Rng data_rng(derive_seed(trial_seed, kStreamDataset));
        const GraphSet sr = sample_dataset(spec.dataset, spec.num_samples, data_rng);

        Clustering clustering;
        if (needs_cluster) clustering = cluster_graphs(sr);

        std::vector<GinWeights> weights;
        std::vector<Eigen::MatrixXd> xr;
        std::vector<GinConfig> seeded = configs;
        if (!spec.value_override && !nn_ids.empty()) {
            for (std::size_t ci = 0; ci < seeded.size(); ++ci) {
                seeded[ci].seed = derive_seed(trial_seed, kStreamWeights + ci);
                weights.push_back(init_weights(seeded[ci], sr.schema));
                xr.push_back(embed_set(sr, weights.back(), seeded[ci]));
            }
        }

        std::vector<std::vector<double>> vals(keys.size());
        for (double t : ts) {
            Rng prng(derive_seed(trial_seed, kStreamPerturb));
            GraphSet sg;
            switch (spec.perturb) {
                case PerturbKind::mix: sg = perturb_mix(sr, t, prng); break;
                case PerturbKind::rewire: sg = perturb_rewire(sr, t, prng); break;
                case PerturbKind::mode_collapse:
                    sg = perturb_mode_collapse(sr, clustering, t, prng);
                    break;
                case PerturbKind::mode_drop:
                    sg = perturb_mode_drop(sr, clustering, t, prng);
                    break;
                case PerturbKind::node_feats: sg = perturb_node_feats(sr, t, prng); break;
                case PerturbKind::edge_feats: sg = perturb_edge_feats(sr, t, prng); break;
            }

            std::size_t key_idx = 0;
            if (spec.value_override) {
                for (const auto& id : ids) vals[key_idx++].push_back(spec.value_override(t, id));
            } else {
                for (std::size_t ci = 0; ci < seeded.size(); ++ci) {
                    if (nn_ids.empty()) break;
                    const Eigen::MatrixXd xg = embed_set(sg, weights[ci], seeded[ci]);
                    for (const MetricScore& s :
                         evaluate_embedding_metrics(xr[ci], xg, nn_ids, spec.prdc_k))
                        vals[key_idx++].push_back(s.dissimilarity);
                }
                for (const MetricScore& s : evaluate_classical_metrics(sr, sg, cl_ids))
                    vals[key_idx++].push_back(s.dissimilarity);
            }
        }

        for (std::size_t k = 0; k < keys.size(); ++k) {
            for (std::size_t ti = 0; ti < ts.size(); ++ti)
                report.curves.push_back({spec.name, spec.dataset, keys[k].first,
                                         keys[k].second, static_cast<std::uint64_t>(trial),
                                         ts[ti], vals[k][ti]});
            rho[k].push_back(spearman(vals[k], ts));
        }
    }

    for (std::size_t k = 0; k < keys.size(); ++k) {
        const std::vector<double>& r = rho[k];
        const double n = static_cast<double>(r.size());
        double mean = 0.0;
        for (double v : r) mean += v;
        mean /= n;
        double se = 0.0;
        if (r.size() > 1) {
            double ss = 0.0;
            for (double v : r) ss += (v - mean) * (v - mean);
            se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        }
        report.summaries.push_back({spec.name, spec.dataset, keys[k].first,
                                    keys[k].second, static_cast<int>(r.size()), mean, se});
    }
    return report;
}

std::vector<int> sample_efficiency_grid(int limit) {
    static const std::vector<int> base = {7,  8,  9,  10, 12, 14, 17,
                                          20, 25, 31, 42, 58, 89, 122};
    std::vector<int> out;
    for (int v : base)
        if (v <= limit) out.push_back(v);
    if (!out.empty() && out.back() == base.back()) {
        int last = base.back();
        for (;;) {
            last = static_cast<int>(std::lround(last * 1.37));
            if (last > limit) break;
            out.push_back(last);
        }
    }
    return out;
}

SampleEfficiencyResult sample_efficiency(
    const GraphSet& sr, const std::string& metric, const MetricOptions& opt, Rng& rng,
    const std::function<double(const GraphSet&, const GraphSet&)>& value_override) {
    validate_metric_ids({metric});
    const int total = static_cast<int>(sr.size());
    SampleEfficiencyResult result;
    result.grid = sample_efficiency_grid(total / 2);
    if (result.grid.empty())
        throw std::invalid_argument("sample_efficiency needs at least 14 graphs");

    const bool nn = is_nn_metric(metric) && !value_override;
    GinWeights weights;
    Eigen::MatrixXd xr_full;
    if (nn) {
        weights = init_weights(opt.gin, sr.schema);
        xr_full = embed_set(sr, weights, opt.gin);
    }

    std::vector<int> order(total);
    std::vector<int> tw_order(total);
    for (int n : result.grid) {
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        // The random set is drawn from the pool-wide collection of twins,
        // not rebuilt from s1's own sources: tying each twin to a reference
        // graph would match the two sets size-for-size and mask the very
        // separation the probe is measuring at small n.
        std::iota(tw_order.begin(), tw_order.end(), 0);
        rng.shuffle(tw_order);

        GraphSet s1, s2, twins;
        s1.schema = s2.schema = twins.schema = sr.schema;
        for (int i = 0; i < n; ++i) s1.graphs.push_back(sr.graphs[order[i]]);
        for (int i = n; i < 2 * n; ++i) s2.graphs.push_back(sr.graphs[order[i]]);
        for (int i = 0; i < n; ++i) {
            Graph tw = er_twin(sr.graphs[tw_order[i]], rng);
            // twins of labeled graphs get uniform labels so they stay
            // comparable under the set's schema
            if (sr.schema.has_node()) {
                tw.node_features.resize(tw.num_nodes);
                for (int& f : tw.node_features)
                    f = static_cast<int>(rng.uniform_index(sr.schema.node_categories));
            }
            if (sr.schema.has_edge()) {
                tw.edge_features.resize(tw.edges.size());
                for (int& f : tw.edge_features)
                    f = static_cast<int>(rng.uniform_index(sr.schema.edge_categories));
            }
            twins.graphs.push_back(std::move(tw));
        }

        double self_val = 0.0, gen_val = 0.0;
        if (value_override) {
            self_val = value_override(s1, s2);
            gen_val = value_override(s1, twins);
        } else if (nn) {
            Eigen::MatrixXd x1(n, xr_full.cols()), x2(n, xr_full.cols());
            for (int i = 0; i < n; ++i) x1.row(i) = xr_full.row(order[i]);
            for (int i = 0; i < n; ++i) x2.row(i) = xr_full.row(order[n + i]);
            const Eigen::MatrixXd xg = embed_set(twins, weights, opt.gin);
            self_val = evaluate_embedding_metrics(x1, x2, {metric}, opt.prdc_k)[0]
                           .dissimilarity;
            gen_val = evaluate_embedding_metrics(x1, xg, {metric}, opt.prdc_k)[0]
                          .dissimilarity;
        } else {
            self_val = evaluate_classical_metrics(s1, s2, {metric})[0].dissimilarity;
            gen_val = evaluate_classical_metrics(s1, twins, {metric})[0].dissimilarity;
        }
        result.self_vals.push_back(self_val);
        result.gen_vals.push_back(gen_val);
    }

    result.n_star = -1;
    for (int i = static_cast<int>(result.grid.size()) - 1; i >= 0; --i) {
        if (!(result.self_vals[i] < result.gen_vals[i])) break;
        result.n_star = result.grid[i];
    }
    return result;
}

std::vector<int> default_sample_steps() {
    std::vector<int> v = {100};
    for (int k = 1; k <= 10; ++k) v.push_back(1000 * k);
    return v;
}

std::vector<int> default_node_steps() {
    std::vector<int> v = {1000};
    for (int k = 1; k <= 10; ++k) v.push_back(10000 * k);
    return v;
}

std::vector<double> default_edge_ps() {
    std::vector<double> v = {0.01};
    for (int k = 1; k <= 10; ++k) v.push_back(0.1 * k);
    return v;
}

std::vector<TimingRow> timing_suite(const TimingSpec& spec) {
    const std::vector<std::string> ids =
        spec.metrics.empty() ? all_metric_ids() : spec.metrics;
    validate_metric_ids(ids);
    const bool any_nn = !registry_filter(ids, true).empty();

    MetricOptions opt;
    opt.metrics = ids;
    opt.gin = spec.gin;
    opt.prdc_k = spec.prdc_k;

    std::vector<TimingRow> rows;
    const auto run_step = [&](const std::string& sweep, double x, const GraphSet& sr,
                              const GraphSet& sg) {
        const TimedScores t = evaluate_metrics(sr, sg, opt);
        if (any_nn) rows.push_back({sweep, x, "embed", t.embed_seconds});
        for (const auto& [metric, secs] : t.metric_seconds)
            rows.push_back({sweep, x, metric, secs});
    };

    if (spec.sweep_samples) {
        const std::vector<int> steps =
            spec.sample_steps.empty() ? default_sample_steps() : spec.sample_steps;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            Rng rng(derive_seed(spec.seed, 0x100 + i));
            const GraphSet sr = sample_er_set(steps[i], 50, 0.01, rng);
            const GraphSet sg = sample_er_set(steps[i], 50, 0.01, rng);
            run_step("samples", steps[i], sr, sg);
        }
    }
    if (spec.sweep_edges) {
        const std::vector<double> ps =
            spec.edge_ps.empty() ? default_edge_ps() : spec.edge_ps;
        for (std::size_t i = 0; i < ps.size(); ++i) {
            Rng rng(derive_seed(spec.seed, 0x200 + i));
            const GraphSet sr = sample_er_set(50, 1000, ps[i], rng);
            const GraphSet sg = sample_er_set(50, 1000, ps[i], rng);
            run_step("edges", ps[i], sr, sg);
        }
    }
    if (spec.sweep_nodes) {
        const std::vector<int> steps =
            spec.node_steps.empty() ? default_node_steps() : spec.node_steps;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            Rng rng(derive_seed(spec.seed, 0x300 + i));
            const double nv = static_cast<double>(steps[i]);
            const double p = 10000.0 / (nv * nv);
            const GraphSet sr = sample_er_set(50, steps[i], p, rng);
            const GraphSet sg = sample_er_set(50, steps[i], p, rng);
            run_step("nodes", nv, sr, sg);
        }
    }
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

namespace {

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    return out;
}

}  // namespace

void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& rows) {
    std::ofstream out = open_csv(path);
    out << "experiment,dataset,metric,config,seed,t,value\n";
    for (const auto& r : rows)
        out << r.experiment << ',' << r.dataset << ',' << r.metric << ',' << r.config
            << ',' << r.seed << ',' << format_double(r.t) << ','
            << format_double(r.value) << '\n';
}

void write_summary_csv(const std::string& path, const std::vector<RhoSummary>& rows) {
    std::ofstream out = open_csv(path);
    out << "experiment,dataset,metric,config,trials,mean_rho,se_rho\n";
    for (const auto& r : rows)
        out << r.experiment << ',' << r.dataset << ',' << r.metric << ',' << r.config
            << ',' << r.trials << ',' << format_double(r.mean_rho) << ','
            << format_double(r.se_rho) << '\n';
}

void write_timing_csv(const std::string& path, const std::vector<TimingRow>& rows) {
    std::ofstream out = open_csv(path);
    out << "sweep,x,metric,seconds\n";
    for (const auto& r : rows)
        out << r.sweep << ',' << format_double(r.x) << ',' << r.metric << ','
            << format_double(r.seconds) << '\n';
}

void write_efficiency_csv(const std::string& path, const std::vector<EfficiencyRow>& rows) {
    std::ofstream out = open_csv(path);
    out << "experiment,dataset,metric,config,seed,n,self,generated,n_star\n";
    for (const auto& r : rows)
        for (std::size_t i = 0; i < r.result.grid.size(); ++i)
            out << r.experiment << ',' << r.dataset << ',' << r.metric << ','
                << r.config << ',' << r.seed << ',' << r.result.grid[i] << ','
                << format_double(r.result.self_vals[i]) << ','
                << format_double(r.result.gen_vals[i]) << ',' << r.result.n_star
                << '\n';
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s, char delim) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, delim)) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

[[noreturn]] void spec_fail(int line, const std::string& msg) {
    throw std::invalid_argument("spec line " + std::to_string(line) + ": " + msg);
}

int parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        int x = std::stoi(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        spec_fail(line, "bad integer '" + v + "'");
    }
}

double parse_real(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        spec_fail(line, "bad number '" + v + "'");
    }
}

}  // namespace

std::vector<BenchmarkEntry> parse_benchmark_spec(const std::string& text) {
    std::vector<BenchmarkEntry> entries;
    std::set<std::string> names;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') spec_fail(lineno, "unterminated section header");
            std::string name = trim(line.substr(1, line.size() - 2));
            if (name.rfind("experiment ", 0) == 0) name = trim(name.substr(11));
            if (name.empty()) spec_fail(lineno, "experiment needs a name");
            if (!names.insert(name).second)
                spec_fail(lineno, "duplicate experiment name '" + name + "'");
            entries.emplace_back();
            entries.back().name = name;
            entries.back().rank.name = name;
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) spec_fail(lineno, "expected key = value");
        if (entries.empty()) spec_fail(lineno, "key outside any [experiment] section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        BenchmarkEntry& e = entries.back();

        try {
            if (key == "type") {
                if (value != "rank" && value != "sample_efficiency" && value != "timing")
                    spec_fail(lineno, "unknown experiment type '" + value + "'");
                e.type = value;
            } else if (key == "dataset") {
                const auto& fams = dataset_families();
                if (std::find(fams.begin(), fams.end(), value) == fams.end())
                    spec_fail(lineno, "unknown dataset family '" + value + "'");
                e.rank.dataset = value;
            } else if (key == "perturb") {
                e.rank.perturb = parse_perturb(value);
            } else if (key == "samples") {
                e.rank.num_samples = parse_int(value, lineno);
            } else if (key == "seeds") {
                e.rank.num_seeds = parse_int(value, lineno);
            } else if (key == "seed") {
                e.rank.seed = std::stoull(value);
                e.timing.seed = e.rank.seed;
            } else if (key == "metrics") {
                const auto ids = split_list(value, ',');
                if (ids.empty()) spec_fail(lineno, "empty metric list");
                validate_metric_ids(ids);
                e.rank.metrics = ids;
                e.timing.metrics = ids;
            } else if (key == "t_grid") {
                const auto toks = split_list(value, ',');
                if (toks.empty()) spec_fail(lineno, "empty t grid");
                e.rank.t_grid.clear();
                for (const auto& tok : toks) e.rank.t_grid.push_back(parse_real(tok, lineno));
            } else if (key == "gin") {
                const auto toks = split_list(value, ';');
                if (toks.empty()) spec_fail(lineno, "empty GIN config list");
                e.rank.gin_configs.clear();
                for (const auto& tok : toks) e.rank.gin_configs.push_back(parse_config_id(tok));
                e.timing.gin = e.rank.gin_configs.front();
            } else if (key == "k") {
                e.rank.prdc_k = parse_int(value, lineno);
                e.timing.prdc_k = e.rank.prdc_k;
            } else if (key == "sweeps") {
                const auto toks = split_list(value, ',');
                if (toks.empty()) spec_fail(lineno, "empty sweep list");
                e.timing.sweep_samples = e.timing.sweep_edges = e.timing.sweep_nodes = false;
                for (const auto& tok : toks) {
                    if (tok == "samples")
                        e.timing.sweep_samples = true;
                    else if (tok == "edges")
                        e.timing.sweep_edges = true;
                    else if (tok == "nodes")
                        e.timing.sweep_nodes = true;
                    else
                        spec_fail(lineno, "unknown sweep '" + tok + "'");
                }
            } else if (key == "sample_steps") {
                for (const auto& tok : split_list(value, ','))
                    e.timing.sample_steps.push_back(parse_int(tok, lineno));
            } else if (key == "node_steps") {
                for (const auto& tok : split_list(value, ','))
                    e.timing.node_steps.push_back(parse_int(tok, lineno));
            } else if (key == "edge_ps") {
                for (const auto& tok : split_list(value, ','))
                    e.timing.edge_ps.push_back(parse_real(tok, lineno));
            } else {
                spec_fail(lineno, "unknown key '" + key + "'");
            }
        } catch (const std::exception& ex) {
            // re-tag errors from nested parsers with the line number
            const std::string what = ex.what();
            if (what.rfind("spec line", 0) == 0) throw;
            spec_fail(lineno, what);
        }
    }
    if (entries.empty()) throw std::invalid_argument("spec contains no experiments");
    return entries;
}

std::vector<std::string> run_benchmark(const std::vector<BenchmarkEntry>& entries,
                                       const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::vector<std::string> written;
    const auto path_for = [&](const std::string& name, const char* suffix) {
        return (fs::path(out_dir) / (name + suffix)).string();
    };

    for (const auto& e : entries) {
        if (e.type == "rank") {
            RankExperimentSpec spec = e.rank;
            spec.name = e.name;
            const ExperimentReport report = run_rank_experiment(spec);
            const std::string curves = path_for(e.name, "_curves.csv");
            const std::string summary = path_for(e.name, "_summary.csv");
            write_curves_csv(curves, report.curves);
            write_summary_csv(summary, report.summaries);
            written.push_back(curves);
            written.push_back(summary);
        } else if (e.type == "sample_efficiency") {
            const std::vector<std::string> ids =
                e.rank.metrics.empty() ? all_metric_ids() : e.rank.metrics;
            GinConfig cfg = e.rank.gin_configs.empty() ? GinConfig{} : e.rank.gin_configs[0];
            std::vector<EfficiencyRow> rows;
            for (int trial = 0; trial < e.rank.num_seeds; ++trial) {
                const std::uint64_t trial_seed = derive_seed(e.rank.seed, trial);
                Rng data_rng(derive_seed(trial_seed, kStreamDataset));
                const GraphSet sr =
                    sample_dataset(e.rank.dataset, e.rank.num_samples, data_rng);
                MetricOptions opt;
                opt.gin = cfg;
                opt.gin.seed = derive_seed(trial_seed, kStreamWeights);
                opt.prdc_k = e.rank.prdc_k;
                for (const auto& id : ids) {
                    Rng eff_rng(derive_seed(trial_seed, kStreamEfficiency));
                    EfficiencyRow row;
                    row.experiment = e.name;
                    row.dataset = e.rank.dataset;
                    row.metric = id;
                    row.config = is_nn_metric(id) ? config_id(opt.gin) : "-";
                    row.seed = static_cast<std::uint64_t>(trial);
                    row.result = sample_efficiency(sr, id, opt, eff_rng);
                    rows.push_back(std::move(row));
                }
            }
            const std::string path = path_for(e.name, "_efficiency.csv");
            write_efficiency_csv(path, rows);
            written.push_back(path);
        } else if (e.type == "timing") {
            TimingSpec spec = e.timing;
            spec.gin.seed = derive_seed(spec.seed, kStreamWeights);
            const std::string path = path_for(e.name, "_timing.csv");
            write_timing_csv(path, timing_suite(spec));
            written.push_back(path);
        } else {
            throw std::invalid_argument("unknown experiment type: " + e.type);
        }
    }
    return written;
}

}  // namespace ggm
