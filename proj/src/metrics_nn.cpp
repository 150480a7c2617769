#include "ggmeval/metrics_nn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace ggm {

namespace {

// Row-block size for streamed pairwise-distance passes; keeps peak memory at
// block * n doubles instead of n^2 while staying BLAS-friendly.
constexpr Eigen::Index kBlock = 1024;

Eigen::MatrixXd squared_distance_block(const Eigen::MatrixXd& a, Eigen::Index lo,
                                       Eigen::Index hi, const Eigen::MatrixXd& b,
                                       const Eigen::VectorXd& nb) {
    Eigen::MatrixXd block = a.middleRows(lo, hi - lo);
    Eigen::VectorXd na = block.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = -2.0 * block * b.transpose();
    d2.colwise() += na;
    d2.rowwise() += nb.transpose();
    return d2.cwiseMax(0.0);
}

double kernel_mean(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                   const KernelSpec& kernel) {
    const Eigen::Index n = a.rows(), m = b.rows();
    Eigen::VectorXd nb = b.rowwise().squaredNorm();
    double total = 0.0;
    for (Eigen::Index lo = 0; lo < n; lo += kBlock) {
        Eigen::Index hi = std::min(n, lo + kBlock);
        switch (kernel.kind) {
            case KernelKind::linear:
                total += (a.middleRows(lo, hi - lo) * b.transpose()).sum();
                break;
            case KernelKind::polynomial3: {
                double d = static_cast<double>(a.cols());
                total += ((a.middleRows(lo, hi - lo) * b.transpose()).array() / d + 1.0)
                             .cube()
                             .sum();
                break;
            }
            default: {
                Eigen::ArrayXXd d2 = squared_distance_block(a, lo, hi, b, nb).array();
                double denom = 2.0 * kernel.sigma * kernel.sigma;
                if (!kernel.squared_distance) d2 = d2.sqrt();
                total += (-d2 / denom).exp().sum();
            }
        }
    }
    return total / (static_cast<double>(n) * static_cast<double>(m));
}

void check_pair(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg) {
    if (xr.rows() == 0 || xg.rows() == 0)
        throw std::invalid_argument("metric needs nonempty sets");
    if (xr.cols() != xg.cols())
        throw std::invalid_argument("embedding widths differ");
}

}  // namespace

double mmd_biased(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg,
                  const KernelSpec& kernel) {
    check_pair(xr, xg);
    return kernel_mean(xr, xr, kernel) + kernel_mean(xg, xg, kernel) -
           2.0 * kernel_mean(xr, xg, kernel);
}

namespace {

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& x) {
    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    return centered.transpose() * centered / static_cast<double>(x.rows() - 1);
}

// Symmetric PSD square root via eigendecomposition, negatives clamped.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& c) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

MetricScore frechet_distance(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg) {
    check_pair(xr, xg);
    if (xr.rows() < 2 || xg.rows() < 2)
        throw std::invalid_argument("frechet_distance needs at least two samples per set");
    Eigen::VectorXd mu_r = xr.colwise().mean();
    Eigen::VectorXd mu_g = xg.colwise().mean();
    Eigen::MatrixXd cr = sample_covariance(xr);
    Eigen::MatrixXd cg = sample_covariance(xg);
    // tr((Cr^1/2 Cg Cr^1/2)^1/2) = sum of sqrt eigenvalues of Cr*Cg, which
    // are exactly the squared singular values of Cg^1/2 * Cr^1/2. Summing
    // singular values keeps everything at the linear scale: eigensolving the
    // product directly puts noise of order eps*|C|^2 under the square root,
    // which drifts visibly once embeddings get large. Jacobi rather than
    // bidiagonal SVD: the latter miscomputes some inputs in Eigen 3.4.0.
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(psd_sqrt(cg) * psd_sqrt(cr));
    const double tr_sqrt = svd.singularValues().sum();
    double fd = (mu_r - mu_g).squaredNorm() + cr.trace() + cg.trace() - 2.0 * tr_sqrt;
    fd = std::max(fd, 0.0);
    return {"fd", fd, to_dissimilarity("fd", fd)};
}

MetricScore mmd_linear(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg) {
    double v = mmd_biased(xr, xg, {KernelKind::linear, 1.0, true});
    return {"mmd_linear", v, to_dissimilarity("mmd_linear", v)};
}

MetricScore kid(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg) {
    double v = mmd_biased(xr, xg, {KernelKind::polynomial3, 1.0, true});
    return {"kid", v, to_dissimilarity("kid", v)};
}

std::vector<double> sigma_grid(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg) {
    check_pair(xr, xg);
    static const double base[] = {0.01, 0.1, 0.25, 0.5, 0.75, 1.0, 2.5, 5.0, 7.5, 10.0};
    Eigen::MatrixXd pool(xr.rows() + xg.rows(), xr.cols());
    pool << xr, xg;
    const Eigen::Index n = pool.rows();
    double mean_dist = 0.0;
    if (n >= 2) {
        Eigen::VectorXd norms = pool.rowwise().squaredNorm();
        double total = 0.0;
        for (Eigen::Index lo = 0; lo < n; lo += kBlock) {
            Eigen::Index hi = std::min(n, lo + kBlock);
            total += squared_distance_block(pool, lo, hi, pool, norms).cwiseSqrt().sum();
        }
        mean_dist = total / (static_cast<double>(n) * (n - 1));  // diagonal adds zero
    }
    std::vector<double> grid;
    grid.reserve(std::size(base));
    for (double b : base) grid.push_back(mean_dist > 0 ? b * mean_dist : 1.0);
    return grid;
}

namespace {

// Mean RBF kernel value between a and b for every sigma at once, so the
// pairwise distances are computed a single time.
std::vector<double> rbf_means(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const std::vector<double>& sigmas, bool squared) {
    const Eigen::Index n = a.rows(), m = b.rows();
    Eigen::VectorXd nb = b.rowwise().squaredNorm();
    std::vector<double> total(sigmas.size(), 0.0);
    for (Eigen::Index lo = 0; lo < n; lo += kBlock) {
        Eigen::Index hi = std::min(n, lo + kBlock);
        Eigen::ArrayXXd d = squared_distance_block(a, lo, hi, b, nb).array();
        if (!squared) d = d.sqrt();
        for (std::size_t s = 0; s < sigmas.size(); ++s)
            total[s] += (-d / (2.0 * sigmas[s] * sigmas[s])).exp().sum();
    }
    for (double& t : total) t /= static_cast<double>(n) * static_cast<double>(m);
    return total;
}

}  // namespace

MetricScore mmd_rbf(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg,
                    bool squared_distance) {
    std::vector<double> sigmas = sigma_grid(xr, xg);
    std::vector<double> rr = rbf_means(xr, xr, sigmas, squared_distance);
    std::vector<double> gg = rbf_means(xg, xg, sigmas, squared_distance);
    std::vector<double> rg = rbf_means(xr, xg, sigmas, squared_distance);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < sigmas.size(); ++s)
        best = std::max(best, rr[s] + gg[s] - 2.0 * rg[s]);
    return {"mmd_rbf", best, to_dissimilarity("mmd_rbf", best)};
}

namespace {

// Distance of each row to its k-th nearest neighbor within the same set,
// self excluded; ties cost nothing here since equal distances share a value.
Eigen::VectorXd knn_radii(const Eigen::MatrixXd& x, int k) {
    const Eigen::Index n = x.rows();
    Eigen::VectorXd norms = x.rowwise().squaredNorm();
    Eigen::VectorXd r(n);
    std::vector<double> row;
    for (Eigen::Index lo = 0; lo < n; lo += kBlock) {
        Eigen::Index hi = std::min(n, lo + kBlock);
        Eigen::MatrixXd d2 = squared_distance_block(x, lo, hi, x, norms);
        for (Eigen::Index i = lo; i < hi; ++i) {
            row.assign(n - 1, 0.0);
            Eigen::Index out = 0;
            for (Eigen::Index j = 0; j < n; ++j)
                if (j != i) row[out++] = d2(i - lo, j);
            std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
            r(i) = std::sqrt(row[k - 1]);
        }
    }
    return r;
}

}  // namespace

Prdc prdc(const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg, int k) {
    check_pair(xr, xg);
    if (k < 1) throw std::invalid_argument("prdc needs k >= 1");
    if (xr.rows() <= k || xg.rows() <= k)
        throw std::invalid_argument("prdc needs more than k samples per set");
    const Eigen::Index nr = xr.rows(), ng = xg.rows();
    Eigen::VectorXd rad_r = knn_radii(xr, k);
    Eigen::VectorXd rad_g = knn_radii(xg, k);
    Eigen::VectorXd ng_norms = xg.rowwise().squaredNorm();

    std::vector<char> gen_inside(ng, 0);
    long density_hits = 0;
    long covered = 0, recalled = 0;
    for (Eigen::Index lo = 0; lo < nr; lo += kBlock) {
        Eigen::Index hi = std::min(nr, lo + kBlock);
        Eigen::MatrixXd cross =
            squared_distance_block(xr, lo, hi, xg, ng_norms).cwiseSqrt();
        for (Eigen::Index i = lo; i < hi; ++i) {
            bool cov = false, rec = false;
            double ri = rad_r(i);
            for (Eigen::Index j = 0; j < ng; ++j) {
                double d = cross(i - lo, j);
                if (d <= ri) {
                    cov = true;
                    gen_inside[j] = 1;
                    ++density_hits;
                }
                if (d <= rad_g(j)) rec = true;
            }
            covered += cov;
            recalled += rec;
        }
    }
    Prdc out;
    long inside = 0;
    for (char c : gen_inside) inside += c;
    out.precision = static_cast<double>(inside) / static_cast<double>(ng);
    out.density = static_cast<double>(density_hits) / (static_cast<double>(k) * ng);
    out.coverage = static_cast<double>(covered) / static_cast<double>(nr);
    out.recall = static_cast<double>(recalled) / static_cast<double>(nr);
    return out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> standardize_pair(
    const Eigen::MatrixXd& xr, const Eigen::MatrixXd& xg) {
    check_pair(xr, xg);
    const Eigen::Index n = xr.rows();
    Eigen::RowVectorXd mu = xr.colwise().mean();
    Eigen::RowVectorXd var = (xr.rowwise() - mu).colwise().squaredNorm() /
                             static_cast<double>(n > 1 ? n - 1 : 1);
    Eigen::RowVectorXd scale = var.cwiseSqrt().cwiseMax(1e-12);
    return {(xr.rowwise() - mu).array().rowwise() / scale.array(),
            (xg.rowwise() - mu).array().rowwise() / scale.array()};
}

double f1(double a, double b) { return (a + b > 0) ? 2.0 * a * b / (a + b) : 0.0; }

double to_dissimilarity(const std::string& metric_id, double raw) {
    if (metric_id == "fd" || metric_id == "kid" || metric_id == "mmd_linear" ||
        metric_id == "mmd_rbf" || metric_id == "degree_mmd" ||
        metric_id == "clustering_mmd" || metric_id == "orbit_mmd")
        return raw;
    if (metric_id == "precision" || metric_id == "recall" || metric_id == "coverage" ||
        metric_id == "f1_pr" || metric_id == "f1_dc" || metric_id == "density")
        return 1.0 - raw;
    throw std::invalid_argument("unknown metric id: " + metric_id);
}

}  // namespace ggm
