#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ggmeval/gin.hpp"
#include "ggmeval/graph.hpp"
#include "ggmeval/metrics_nn.hpp"
#include "ggmeval/rng.hpp"

namespace ggm {

// Seed splitting: one base seed expands deterministically into everything a
// run needs. trial_seed = derive_seed(base, trial_index); within a trial,
//   dataset rng     = Rng(derive_seed(trial_seed, kStreamDataset))
//   perturbation    = Rng(derive_seed(trial_seed, kStreamPerturb)), fresh per t
//                     so the perturbed subsets nest as t grows
//   sample subsets  = Rng(derive_seed(trial_seed, kStreamEfficiency))
//   GIN weights     = derive_seed(trial_seed, kStreamWeights + config_index)
inline constexpr std::uint64_t kStreamDataset = 1;
inline constexpr std::uint64_t kStreamPerturb = 2;
inline constexpr std::uint64_t kStreamEfficiency = 3;
inline constexpr std::uint64_t kStreamWeights = 0x1000;

// Pearson correlation of average ranks (ties get the mean of their rank
// range). Returns 0 when either side has zero rank variance.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

enum class PerturbKind { mix, rewire, mode_collapse, mode_drop, node_feats, edge_feats };

PerturbKind parse_perturb(const std::string& name);
std::string perturb_name(PerturbKind kind);

// Families: grid, lobster, community, community-labeled (4 node / 3 edge
// categories), er (|V|=50, p=0.01).
GraphSet sample_dataset(const std::string& family, int count, Rng& rng);
const std::vector<std::string>& dataset_families();

// Metric registry. Embedding-space ids: fd, kid, mmd_linear, mmd_rbf,
// precision, recall, f1_pr, density, coverage, f1_dc. Graph-statistic ids:
// degree_mmd, clustering_mmd, orbit_mmd.
const std::vector<std::string>& nn_metric_ids();
const std::vector<std::string>& classical_metric_ids();
const std::vector<std::string>& all_metric_ids();
bool is_nn_metric(const std::string& id);
bool is_classical_metric(const std::string& id);

struct MetricOptions {
    std::vector<std::string> metrics;  // empty -> all_metric_ids()
    GinConfig gin;
    int prdc_k = 5;
};

// Scores for the embedding-space ids among `ids`, in registry order. The
// four k-NN metrics come from a single pass whose wall time lands under the
// key "prdc" in `seconds`; other metrics are keyed by their own id.
std::vector<MetricScore> evaluate_embedding_metrics(
    const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg,
    const std::vector<std::string>& ids, int prdc_k,
    std::map<std::string, double>* seconds = nullptr);

// Scores for the graph-statistic ids among `ids`.
std::vector<MetricScore> evaluate_classical_metrics(
    const GraphSet& sr, const GraphSet& sg, const std::vector<std::string>& ids,
    std::map<std::string, double>* seconds = nullptr);

struct TimedScores {
    std::vector<MetricScore> scores;
    double embed_seconds = 0.0;  // weight init + both sets
    std::map<std::string, double> metric_seconds;
};

// End to end: init weights from opt.gin, embed both sets, evaluate every
// requested metric.
TimedScores evaluate_metrics(const GraphSet& sr, const GraphSet& sg,
                             const MetricOptions& opt);

std::vector<double> default_t_grid();  // {0.0, 0.1, ..., 1.0}

struct RankExperimentSpec {
    std::string name = "rank";
    std::string dataset = "grid";
    PerturbKind perturb = PerturbKind::rewire;
    int num_samples = 100;
    std::vector<double> t_grid;            // empty -> default_t_grid()
    std::vector<std::string> metrics;      // empty -> all_metric_ids()
    std::vector<GinConfig> gin_configs;    // empty -> one default config
    int prdc_k = 5;
    std::uint64_t seed = 0;
    int num_seeds = 1;

    // When set, replaces every metric's dissimilarity with override(t, id)
    // and skips embedding entirely. Lets tests drive the experiment plumbing
    // with synthetic metrics (e.g. a metric that equals t must score rho=1).
    std::function<double(double, const std::string&)> value_override;
};

struct CurvePoint {
    std::string experiment, dataset, metric, config;
    std::uint64_t seed = 0;
    double t = 0.0, value = 0.0;
};

struct RhoSummary {
    std::string experiment, dataset, metric, config;
    int trials = 0;
    double mean_rho = 0.0, se_rho = 0.0;
};

struct ExperimentReport {
    std::vector<CurvePoint> curves;
    std::vector<RhoSummary> summaries;
};

// Per trial: sample the reference set, apply the perturbation across the t
// grid (same perturbation seed for every t, so the affected subsets nest),
// score every metric's dissimilarity at every t, and take Spearman rank
// correlation against t. Summaries aggregate rho over trials as mean and
// standard error. Graph-statistic metrics do not depend on the GIN config
// and are reported once per trial with config "-".
ExperimentReport run_rank_experiment(const RankExperimentSpec& spec);

// {7, 8, 9, 10, 12, 14, 17, 20, 25, 31, 42, 58, 89, 122, ...} extended by
// ~1.37x steps, truncated to values <= limit.
std::vector<int> sample_efficiency_grid(int limit);

struct SampleEfficiencyResult {
    std::vector<int> grid;
    std::vector<double> self_vals;  // dissimilarity of two disjoint subsets
    std::vector<double> gen_vals;   // dissimilarity of subset vs its E-R twins
    int n_star = -1;                // -1: never separated
};

// For each grid n (capped at |S|/2 so the subsets can be disjoint): draw
// disjoint subsets S', S'' of size n and E-R twins of S'; n* is the smallest
// n where self < generated there and at every larger tested n.
// `value_override`, when set, replaces the metric with override(a, b) for
// both the self pair and the subset/twin pair (test hook; no embedding runs).
SampleEfficiencyResult sample_efficiency(
    const GraphSet& sr, const std::string& metric, const MetricOptions& opt, Rng& rng,
    const std::function<double(const GraphSet&, const GraphSet&)>& value_override = {});

struct TimingSpec {
    std::vector<std::string> metrics;   // empty -> all_metric_ids()
    GinConfig gin;
    int prdc_k = 5;
    std::uint64_t seed = 0;
    bool sweep_samples = true, sweep_edges = true, sweep_nodes = true;
    std::vector<int> sample_steps;      // empty -> {100, 1000, 2000, ..., 10000}
    std::vector<int> node_steps;        // empty -> {1000, 10000, ..., 100000}
    std::vector<double> edge_ps;        // empty -> {0.01, 0.1, 0.2, ..., 1.0}
};

std::vector<int> default_sample_steps();
std::vector<int> default_node_steps();
std::vector<double> default_edge_ps();

struct TimingRow {
    std::string sweep;   // samples | edges | nodes
    double x = 0.0;      // set size, edge probability, or node count
    std::string metric;  // metric id, "prdc", or "embed"
    double seconds = 0.0;
};

// Three sweeps over E-R graph sets: set size at |V|=50 with Proteins-like
// sparsity (p=0.01); edge probability at 50 graphs, |V|=1000; node count at
// 50 graphs with p = 10000/|V|^2 so the expected pair count stays put.
// Embedding extraction is timed separately from the metrics that consume it.
std::vector<TimingRow> timing_suite(const TimingSpec& spec);

// Lossless, locale-independent decimal for CSVs (%.17g).
std::string format_double(double v);

void write_curves_csv(const std::string& path, const std::vector<CurvePoint>& rows);
void write_summary_csv(const std::string& path, const std::vector<RhoSummary>& rows);
void write_timing_csv(const std::string& path, const std::vector<TimingRow>& rows);

struct EfficiencyRow {
    std::string experiment, dataset, metric, config;
    std::uint64_t seed = 0;
    SampleEfficiencyResult result;
};

void write_efficiency_csv(const std::string& path, const std::vector<EfficiencyRow>& rows);

// One experiment section of a benchmark spec file.
struct BenchmarkEntry {
    std::string name;
    std::string type = "rank";  // rank | sample_efficiency | timing
    RankExperimentSpec rank;    // rank + sample_efficiency share these fields
    TimingSpec timing;
};

// Parses the key=value spec format:
//   [experiment name]
//   type = rank
//   dataset = grid
//   perturb = rewire
//   samples = 100
//   seeds = 10
//   seed = 0
//   metrics = degree_mmd, mmd_rbf, fd
//   t_grid = 0, 0.25, 0.5, 0.75, 1
//   gin = L3-d35-sum-sum-concat; L1-d16-mean-mean-last
//   k = 5
//   sweeps = samples, edges        (timing only)
//   sample_steps = 100, 500        (timing only)
//   node_steps = 1000, 2000        (timing only)
//   edge_ps = 0.01, 0.1            (timing only)
// Unknown keys are errors. '#' starts a comment.
std::vector<BenchmarkEntry> parse_benchmark_spec(const std::string& text);

// Runs every entry and writes <out_dir>/<name>_{curves,summary,efficiency,
// timing}.csv as applicable. Returns the written paths.
std::vector<std::string> run_benchmark(const std::vector<BenchmarkEntry>& entries,
                                       const std::string& out_dir);

}  // namespace ggm
