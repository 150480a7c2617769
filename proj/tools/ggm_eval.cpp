// ggm-eval: compare graph sets with embedding-based and graph-statistic
// metrics, run the benchmark protocol, generate synthetic sets, dump
// embeddings.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ggmeval/experiments.hpp"
#include "ggmeval/generators.hpp"
#include "ggmeval/gin.hpp"
#include "ggmeval/graph.hpp"
#include "ggmeval/io.hpp"
#include "ggmeval/metrics_nn.hpp"
#include "ggmeval/rng.hpp"

namespace {

using namespace ggm;

// base-seed stream for the 50/50 reference split in `compare`
constexpr std::uint64_t kStreamSplit = 7;

struct GinFlags {
    int layers = 3;
    int dim = 35;
    std::string agg = "sum";
    std::string readout = "sum";
    bool no_concat = false;

    GinConfig to_config() const {
        GinConfig c;
        c.layers = layers;
        c.dim = dim;
        c.aggregator = parse_agg(agg);
        c.readout = parse_agg(readout);
        c.concat_layers = !no_concat;
        return c;
    }
};

void add_gin_flags(CLI::App* cmd, GinFlags& f) {
    cmd->add_option("--gin-layers", f.layers, "message passing rounds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--gin-dim", f.dim, "hidden width per layer")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--agg", f.agg, "neighbourhood aggregator")
        ->check(CLI::IsMember({"sum", "mean", "max"}))
        ->capture_default_str();
    cmd->add_option("--readout", f.readout, "graph readout")
        ->check(CLI::IsMember({"sum", "mean", "max"}))
        ->capture_default_str();
    cmd->add_flag("--no-concat", f.no_concat,
                  "read out only the last layer instead of concatenating all");
}

std::vector<std::string> parse_metric_list(const std::string& csv) {
    std::vector<std::string> ids;
    std::istringstream in(csv);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const std::size_t a = tok.find_first_not_of(" \t");
        if (a == std::string::npos) continue;
        const std::size_t b = tok.find_last_not_of(" \t");
        ids.push_back(tok.substr(a, b - a + 1));
    }
    if (ids.size() == 1 && ids[0] == "all") return all_metric_ids();
    for (const auto& id : ids)
        if (!is_nn_metric(id) && !is_classical_metric(id))
            throw std::invalid_argument("unknown metric: " + id);
    if (ids.empty()) throw std::invalid_argument("empty metric list");
    return ids;
}

struct Stat {
    double mean = 0.0, se = 0.0;
};

Stat mean_se(const std::vector<double>& v) {
    Stat s;
    const double n = static_cast<double>(v.size());
    for (double x : v) s.mean += x;
    s.mean /= n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - s.mean) * (x - s.mean);
        s.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return s;
}

struct CompareRow {
    std::string metric;
    Stat raw, dissim;
    bool has_baseline = false;
    Stat baseline;  // dissimilarity of the 50/50 reference split
};

struct CompareArgs {
    std::string ref, gen, metrics_csv, out, format = "text";
    GinFlags gin;
    int seeds = 10;
    int k = 5;
    std::uint64_t seed = 0;
    bool baseline = false;
};

int cmd_compare(const CompareArgs& args) {
    const GraphSet sr = load_graphset(args.ref);
    const GraphSet sg = load_graphset(args.gen);
    if (sr.graphs.empty() || sg.graphs.empty())
        throw std::runtime_error("both sets must be nonempty");

    std::vector<std::string> ids;
    if (!args.metrics_csv.empty()) {
        ids = parse_metric_list(args.metrics_csv);
    } else {
        // MMD RBF needs about 42 samples to separate distributions; below
        // that the precision/recall F1 is the better default
        const bool big = sr.size() >= 42 && sg.size() >= 42;
        ids = {big ? "mmd_rbf" : "f1_pr"};
    }

    GraphSet half_a, half_b;
    if (args.baseline) {
        std::vector<int> order(sr.size());
        for (std::size_t i = 0; i < sr.size(); ++i) order[i] = static_cast<int>(i);
        Rng split_rng(derive_seed(args.seed, kStreamSplit));
        split_rng.shuffle(order);
        half_a.schema = half_b.schema = sr.schema;
        const std::size_t cut = sr.size() / 2;
        for (std::size_t i = 0; i < sr.size(); ++i)
            (i < cut ? half_a : half_b).graphs.push_back(sr.graphs[order[i]]);
        if (half_a.graphs.empty() || half_b.graphs.empty())
            throw std::runtime_error("reference set too small for a 50/50 baseline");
    }

    // metric -> per-trial values, in registry order of the requested ids
    std::map<std::string, std::vector<double>> raw, dis, base_dis;
    const auto record = [](std::map<std::string, std::vector<double>>& into,
                           const std::vector<MetricScore>& scores, bool raw_val) {
        for (const auto& s : scores)
            into[s.metric_id].push_back(raw_val ? s.raw : s.dissimilarity);
    };

    for (int trial = 0; trial < args.seeds; ++trial) {
        const std::uint64_t trial_seed = derive_seed(args.seed, trial);
        MetricOptions opt;
        opt.metrics = ids;
        opt.gin = args.gin.to_config();
        opt.gin.seed = derive_seed(trial_seed, kStreamWeights);
        opt.prdc_k = args.k;
        const TimedScores t = evaluate_metrics(sr, sg, opt);
        record(raw, t.scores, true);
        record(dis, t.scores, false);
        if (args.baseline)
            record(base_dis, evaluate_metrics(half_a, half_b, opt).scores, false);
    }

    std::vector<CompareRow> rows;
    for (const auto& id : all_metric_ids()) {
        if (!raw.count(id)) continue;
        CompareRow r;
        r.metric = id;
        r.raw = mean_se(raw[id]);
        r.dissim = mean_se(dis[id]);
        if (args.baseline) {
            r.has_baseline = true;
            r.baseline = mean_se(base_dis[id]);
        }
        rows.push_back(r);
    }

    std::ostringstream body;
    body << "# ggm-eval compare\n";
    body << "# ref: " << args.ref << " (" << sr.size() << " graphs), gen: " << args.gen
         << " (" << sg.size() << " graphs)\n";
    body << "# gin: " << config_id(args.gin.to_config()) << ", trials: " << args.seeds
         << ", k: " << args.k << ", seed: " << args.seed << "\n";
    body << "# seed splitting: trial_seed = derive_seed(seed, trial); gin weights use "
            "derive_seed(trial_seed, 4096); the 50/50 baseline split uses "
            "derive_seed(seed, 7)\n";
    if (args.format == "csv") {
        body << "metric,raw_mean,raw_se,dissimilarity_mean,dissimilarity_se,"
                "baseline_mean,baseline_se\n";
        for (const auto& r : rows) {
            body << r.metric << ',' << format_double(r.raw.mean) << ','
                 << format_double(r.raw.se) << ',' << format_double(r.dissim.mean) << ','
                 << format_double(r.dissim.se) << ',';
            if (r.has_baseline)
                body << format_double(r.baseline.mean) << ','
                     << format_double(r.baseline.se);
            else
                body << ',';
            body << '\n';
        }
    } else {
        body << std::left << std::setw(16) << "metric" << std::setw(14) << "raw"
             << std::setw(12) << "raw_se" << std::setw(14) << "dissim" << std::setw(12)
             << "dissim_se";
        if (args.baseline) body << std::setw(14) << "baseline" << std::setw(12) << "base_se";
        body << '\n';
        body << std::setprecision(6);
        for (const auto& r : rows) {
            body << std::left << std::setw(16) << r.metric << std::setw(14) << r.raw.mean
                 << std::setw(12) << r.raw.se << std::setw(14) << r.dissim.mean
                 << std::setw(12) << r.dissim.se;
            if (r.has_baseline)
                body << std::setw(14) << r.baseline.mean << std::setw(12) << r.baseline.se;
            body << '\n';
        }
    }

    if (args.out.empty()) {
        std::cout << body.str();
    } else {
        std::ofstream f(args.out);
        if (!f) throw std::runtime_error("cannot write " + args.out);
        f << body.str();
    }
    return 0;
}

int cmd_benchmark(const std::string& spec_path, const std::string& out_dir) {
    std::ifstream f(spec_path);
    if (!f) throw std::runtime_error("cannot read " + spec_path);
    std::stringstream buf;
    buf << f.rdbuf();
    const auto entries = parse_benchmark_spec(buf.str());
    const auto written = run_benchmark(entries, out_dir);
    std::cout << "# seed splitting: trial_seed = derive_seed(seed, trial); dataset rng "
                 "stream 1, perturbation stream 2, subset stream 3, gin weights stream "
                 "4096+config\n";
    for (const auto& p : written) std::cout << p << '\n';
    return 0;
}

int cmd_generate(const std::string& family, int count, std::uint64_t seed, int er_nodes,
                 double er_p, const std::string& out) {
    Rng rng(seed);
    GraphSet s;
    if (family == "er") {
        s = sample_er_set(count, er_nodes, er_p, rng);
    } else {
        s = sample_dataset(family, count, rng);
    }
    save_graphset(s, out);
    std::cout << "wrote " << s.size() << " " << family << " graphs to " << out << '\n';
    return 0;
}

int cmd_embed(const std::string& set_path, const GinFlags& gin, std::uint64_t seed,
              int pca_k, const std::string& out) {
    const GraphSet s = load_graphset(set_path);
    if (s.graphs.empty()) throw std::runtime_error("empty graph set: " + set_path);
    GinConfig cfg = gin.to_config();
    cfg.seed = seed;
    const GinWeights weights = init_weights(cfg, s.schema);
    const Eigen::MatrixXd x = embed_set(s, weights, cfg);
    write_matrix_csv(x, out);
    std::cout << "wrote " << x.rows() << "x" << x.cols() << " embedding to " << out << '\n';
    if (pca_k > 0) {
        std::string pca_path = out;
        const std::string suffix = ".csv";
        if (pca_path.size() > suffix.size() &&
            pca_path.compare(pca_path.size() - suffix.size(), suffix.size(), suffix) == 0)
            pca_path.insert(pca_path.size() - suffix.size(), ".pca");
        else
            pca_path += ".pca.csv";
        const Eigen::MatrixXd proj = pca_project(x, pca_k);
        write_matrix_csv(proj, pca_path);
        std::cout << "wrote " << proj.rows() << "x" << proj.cols() << " projection to "
                  << pca_path << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"graph set dissimilarity via random GIN embeddings"};
    app.require_subcommand(1);

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "score a generated set against a reference");
    compare->add_option("--ref", cmp.ref, "reference graph set (jsonl)")->required();
    compare->add_option("--gen", cmp.gen, "generated graph set (jsonl)")->required();
    compare->add_option("--metrics", cmp.metrics_csv,
                        "comma-separated metric ids, or 'all' (default: mmd_rbf when "
                        "both sets have >= 42 graphs, else f1_pr)");
    add_gin_flags(compare, cmp.gin);
    compare->add_option("--seeds", cmp.seeds, "number of random GIN initializations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare->add_option("--seed", cmp.seed, "base seed")->capture_default_str();
    compare->add_option("--k", cmp.k, "k for the k-NN metrics")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    compare->add_flag("--baseline", cmp.baseline,
                      "also score a 50/50 split of the reference against itself");
    compare->add_option("--out", cmp.out, "write the report here instead of stdout");
    compare->add_option("--format", cmp.format, "report format")
        ->check(CLI::IsMember({"csv", "text"}))
        ->capture_default_str();

    std::string bench_spec, bench_out = "benchmark-results";
    auto* benchmark = app.add_subcommand("benchmark", "run experiments from a spec file");
    benchmark->add_option("spec", bench_spec, "experiment spec file")->required();
    benchmark->add_option("--out", bench_out, "output directory")->capture_default_str();

    std::string gen_family, gen_out;
    int gen_count = 100, gen_nodes = 50;
    double gen_p = 0.01;
    std::uint64_t gen_seed = 0;
    auto* generate = app.add_subcommand("generate", "write a synthetic graph set");
    generate->add_option("--family", gen_family, "grid | lobster | community | community-labeled | er")
        ->required();
    generate->add_option("--count", gen_count, "graphs to generate")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    generate->add_option("--seed", gen_seed, "generator seed")->capture_default_str();
    generate->add_option("--nodes", gen_nodes, "er only: nodes per graph")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    generate->add_option("--p", gen_p, "er only: edge probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    generate->add_option("--out", gen_out, "output path (jsonl)")->required();

    std::string embed_set_path, embed_out;
    GinFlags embed_gin;
    std::uint64_t embed_seed = 0;
    int embed_pca = 0;
    auto* embed = app.add_subcommand("embed", "dump GIN embeddings for a graph set");
    embed->add_option("set", embed_set_path, "graph set (jsonl)")->required();
    add_gin_flags(embed, embed_gin);
    embed->add_option("--seed", embed_seed, "weight seed")->capture_default_str();
    embed->add_option("--pca", embed_pca, "also write the top-k PCA projection")
        ->check(CLI::PositiveNumber);
    embed->add_option("--out", embed_out, "output CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compare->parsed()) return cmd_compare(cmp);
        if (benchmark->parsed()) return cmd_benchmark(bench_spec, bench_out);
        if (generate->parsed())
            return cmd_generate(gen_family, gen_count, gen_seed, gen_nodes, gen_p, gen_out);
        if (embed->parsed())
            return cmd_embed(embed_set_path, embed_gin, embed_seed, embed_pca, embed_out);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
