#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace ggm {

// raw: the metric's native value. dissimilarity: normalized so identical
// distributions score ~0 and larger means more different (similarity-style
// metrics are flipped; see to_dissimilarity).
struct MetricScore {
    std::string metric_id;
    double raw = 0.0;
    double dissimilarity = 0.0;
};

enum class KernelKind { linear, polynomial3, rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::rbf;
    double sigma = 1.0;          // rbf only
    bool squared_distance = true;  // rbf: exp(-d^2/2s^2) vs exp(-d/2s^2)
};

// Biased two-sample estimator: mean k over all real pairs + mean k over all
// generated pairs - 2 * mean k over cross pairs, diagonals included.
double mmd_biased(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg,
                  const KernelSpec& kernel);

// ||mu_r - mu_g||^2 + Tr(Cr + Cg - 2 (Cr Cg)^(1/2)), Gaussians fitted with
// unbiased covariances; the matrix square root goes through the symmetric
// form Cr^(1/2) Cg Cr^(1/2) with eigenvalues clamped at zero.
MetricScore frechet_distance(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg);

MetricScore mmd_linear(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg);

// MMD with k(x,y) = (x.y / width + 1)^3.
MetricScore kid(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg);

// {0.01, 0.1, 0.25, 0.5, 0.75, 1.0, 2.5, 5.0, 7.5, 10.0} scaled by the mean
// Euclidean distance over all pairs of the pooled rows. Degenerate pools
// (mean distance zero) fall back to sigma = 1 for every entry.
std::vector<double> sigma_grid(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg);

// max over the sigma grid of the biased RBF MMD.
MetricScore mmd_rbf(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg,
                    bool squared_distance = true);

struct Prdc {
    double precision = 0.0;
    double recall = 0.0;
    double density = 0.0;
    double coverage = 0.0;
};

// k-NN hypersphere metrics; radii are each sample's distance to its k-th
// nearest neighbor within its own set (self excluded, ties broken by index),
// membership uses closed balls.
Prdc prdc(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg, int k);

// Column z-scores computed from the first (reference) set's statistics and
// applied to both sets; near-constant columns (sd below 1e-12) are centered
// but not scaled. Distance-based neighborhood metrics want commensurable
// coordinates: raw embedding columns span orders of magnitude (graph size
// dominates), which stretches the k-NN radii along the size directions and
// masks structural displacement. Reference-only statistics mirror feature
// extractors whose internal normalization is calibrated on real data, and
// keep a generated set's own spread from damping the very directions in
// which it deviates.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> standardize_pair(
    const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg);

// Harmonic mean, 0 when a + b == 0.
double f1(double a, double b);

// fd / kid / mmd_* pass through; precision, recall, coverage, f1_* map to
// 1 - s; density maps to 1 - d (may be negative).
double to_dissimilarity(const std::string& metric_id, double raw);

}  // namespace ggm
