#include "ggmeval/gin.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "ggmeval/parallel.hpp"
#include "ggmeval/rng.hpp"

namespace ggm {

Agg parse_agg(const std::string& name) {
    if (name == "sum") return Agg::sum;
    if (name == "mean") return Agg::mean;
    if (name == "max") return Agg::max;
    throw std::invalid_argument("unknown aggregator: " + name);
}

std::string agg_name(Agg a) {
    switch (a) {
        case Agg::sum: return "sum";
        case Agg::mean: return "mean";
        default: return "max";
    }
}

std::string config_id(const GinConfig& c) {
    std::string s = "L" + std::to_string(c.layers) + "-d" + std::to_string(c.dim) +
                    "-" + agg_name(c.aggregator) + "-" + agg_name(c.readout);
    s += c.concat_layers ? "-concat" : "-last";
    if (c.init == WeightInit::uniform) s += "-uniform";
    return s;
}

GinConfig parse_config_id(const std::string& id) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : id) {
        if (ch == '-') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    const auto fail = [&]() -> GinConfig {
        throw std::invalid_argument("bad GIN config id: " + id);
    };
    if (parts.size() < 5 || parts.size() > 6) return fail();
    if (parts[0].size() < 2 || parts[0][0] != 'L') return fail();
    if (parts[1].size() < 2 || parts[1][0] != 'd') return fail();
    GinConfig c;
    try {
        c.layers = std::stoi(parts[0].substr(1));
        c.dim = std::stoi(parts[1].substr(1));
    } catch (const std::exception&) {
        return fail();
    }
    if (c.layers < 1 || c.dim < 1) return fail();
    c.aggregator = parse_agg(parts[2]);
    c.readout = parse_agg(parts[3]);
    if (parts[4] == "concat")
        c.concat_layers = true;
    else if (parts[4] == "last")
        c.concat_layers = false;
    else
        return fail();
    if (parts.size() == 6) {
        if (parts[5] != "uniform") return fail();
        c.init = WeightInit::uniform;
    }
    return c;
}

namespace {

Eigen::MatrixXd gaussian_matrix(int rows, int cols, Rng& rng) {
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.normal();
    return m;
}

// Orthonormal columns when tall, orthonormal rows when wide; signs fixed by
// the QR factor's diagonal so the result is Haar-distributed.
Eigen::MatrixXd orthogonal_matrix(int rows, int cols, Rng& rng) {
    const bool tall = rows >= cols;
    const int big = tall ? rows : cols, small = tall ? cols : rows;
    Eigen::MatrixXd a = gaussian_matrix(big, small, rng);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(big, small);
    Eigen::MatrixXd r = qr.matrixQR().topRows(small);
    for (int j = 0; j < small; ++j)
        if (r(j, j) < 0) q.col(j) = -q.col(j);
    return tall ? q : Eigen::MatrixXd(q.transpose());
}

Eigen::MatrixXd uniform_matrix(int rows, int cols, Rng& rng) {
    const double limit = std::sqrt(6.0 / (rows + cols));
    Eigen::MatrixXd m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-limit, limit);
    return m;
}

}  // namespace

GinWeights init_weights(const GinConfig& config, const FeatureSchema& schema) {
    if (config.layers < 1 || config.dim < 1 || config.mlp_layers < 1)
        throw std::invalid_argument("invalid GIN configuration");
    GinWeights weights;
    weights.schema = schema;
    weights.input_width = input_feature_width(schema);
    weights.edge_width = schema.has_edge() ? schema.edge_categories : 0;
    Rng rng(config.seed);
    for (int l = 0; l < config.layers; ++l) {
        int in = (l == 0 ? weights.input_width : config.dim) + weights.edge_width;
        std::vector<Eigen::MatrixXd> ws;
        std::vector<Eigen::VectorXd> bs;
        for (int s = 0; s < config.mlp_layers; ++s) {
            int rows = config.dim;
            int cols = (s == 0) ? in : config.dim;
            ws.push_back(config.init == WeightInit::orthogonal
                             ? orthogonal_matrix(rows, cols, rng)
                             : uniform_matrix(rows, cols, rng));
            // Nonzero biases matter: with the scalar degree input a bias-free
            // ReLU cascade is positively homogeneous, so every layer's node
            // states collapse onto one ray and the embedding degenerates to
            // per-layer walk counts no matter how large dim is.
            const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
            Eigen::VectorXd bias(rows);
            for (int r = 0; r < rows; ++r) bias(r) = rng.uniform(-bound, bound);
            bs.push_back(std::move(bias));
        }
        weights.w.push_back(std::move(ws));
        weights.b.push_back(std::move(bs));
    }
    return weights;
}

namespace {

// h: n x width. Returns n x (width + edge_width) rows of
// concat(h_v, 0) + aggregate over neighbors of concat(h_u, onehot(a_uv)).
Eigen::MatrixXd combine_messages(const Graph& g, const Eigen::MatrixXd& h,
                                 int edge_width, Agg aggregator,
                                 const std::vector<std::vector<int>>& nbr,
                                 const std::vector<std::vector<int>>& eid) {
    const int n = g.num_nodes;
    const int width = static_cast<int>(h.cols());
    Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, width + edge_width);
    Eigen::VectorXd msg(width + edge_width);
    for (int v = 0; v < n; ++v) {
        const auto& ns = nbr[v];
        if (aggregator == Agg::sum || aggregator == Agg::mean) {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(width + edge_width);
            for (std::size_t i = 0; i < ns.size(); ++i) {
                acc.head(width) += h.row(ns[i]).transpose();
                if (edge_width > 0) acc(width + g.edge_features[eid[v][i]]) += 1.0;
            }
            if (aggregator == Agg::mean && !ns.empty()) acc /= static_cast<double>(ns.size());
            z.row(v) = acc.transpose();
        } else {  // max; empty neighborhoods aggregate to the zero vector
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(width + edge_width);
            for (std::size_t i = 0; i < ns.size(); ++i) {
                msg.setZero();
                msg.head(width) = h.row(ns[i]).transpose();
                if (edge_width > 0) msg(width + g.edge_features[eid[v][i]]) = 1.0;
                acc = (i == 0) ? msg : acc.cwiseMax(msg);
            }
            z.row(v) = acc.transpose();
        }
        z.row(v).head(width) += h.row(v);  // self term, zero-padded over edge slots
    }
    return z;
}

Eigen::VectorXd readout_rows(const Eigen::MatrixXd& h, Agg readout) {
    switch (readout) {
        case Agg::sum: return h.colwise().sum().transpose();
        case Agg::mean: return h.colwise().mean().transpose();
        default: return h.colwise().maxCoeff().transpose();
    }
}

}  // namespace

Eigen::VectorXd forward(const Graph& g, const GinWeights& weights, const GinConfig& config) {
    if (g.num_nodes < 1) throw std::invalid_argument("forward needs at least one node");
    if (!weights.schema.has_edge() && g.has_edge_features())
        throw std::invalid_argument("graph features do not match the embedding schema");
    std::string err = g.validate(&weights.schema);
    if (!err.empty())
        throw std::invalid_argument("graph does not match the embedding schema: " + err);

    std::vector<std::vector<int>> nbr, eid;
    adjacency_with_edges(g, nbr, eid);

    Eigen::MatrixXd h = degree_augment(g, weights.schema);
    Eigen::VectorXd out(config.output_width());
    for (int l = 0; l < config.layers; ++l) {
        Eigen::MatrixXd z =
            combine_messages(g, h, weights.edge_width, config.aggregator, nbr, eid);
        for (std::size_t s = 0; s < weights.w[l].size(); ++s) {
            z = (z * weights.w[l][s].transpose()).rowwise() + weights.b[l][s].transpose();
            if (s + 1 < weights.w[l].size()) z = z.cwiseMax(0.0);  // ReLU between maps
        }
        h = std::move(z);
        if (config.concat_layers)
            out.segment(static_cast<Eigen::Index>(l) * config.dim, config.dim) =
                readout_rows(h, config.readout);
    }
    if (!config.concat_layers) out = readout_rows(h, config.readout);
    if (!out.allFinite()) throw std::runtime_error("non-finite embedding");
    return out;
}

Eigen::MatrixXd embed_set(const GraphSet& s, const GinWeights& weights,
                          const GinConfig& config) {
    Eigen::MatrixXd x(static_cast<Eigen::Index>(s.size()), config.output_width());
    std::vector<std::string> errors(s.size());
    parallel_for(s.size(), [&](std::size_t i) {
        try {
            x.row(static_cast<Eigen::Index>(i)) = forward(s.graphs[i], weights, config);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw std::runtime_error("graph " + std::to_string(i) + ": " + errors[i]);
    return x;
}

Eigen::MatrixXd pca_project(const Eigen::MatrixXd& x, int k) {
    const Eigen::Index n = x.rows(), d = x.cols();
    if (n < 2) throw std::invalid_argument("pca_project needs at least two rows");
    if (k < 1 || k > d) throw std::invalid_argument("pca_project: bad component count");
    Eigen::MatrixXd centered = x.rowwise() - x.colwise().mean();
    Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.info() != Eigen::Success) throw std::runtime_error("pca eigendecomposition failed");
    const auto& evals = es.eigenvalues();  // ascending
    const double tol = std::max(evals.cwiseAbs().maxCoeff(), 1e-300) * 1e-12;
    Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(d, k);
    int zeroed = 0;
    for (int i = 0; i < k; ++i) {
        Eigen::Index src = d - 1 - i;
        if (evals(src) <= tol) {
            ++zeroed;  // beyond the data's rank; leave the column zero
            continue;
        }
        Eigen::VectorXd v = es.eigenvectors().col(src);
        Eigen::Index arg;
        v.cwiseAbs().maxCoeff(&arg);
        if (v(arg) < 0) v = -v;
        basis.col(i) = v;
    }
    if (zeroed > 0)
        std::cerr << "pca_project: " << zeroed << " component(s) beyond data rank, zero-filled\n";
    return centered * basis;
}

void write_matrix_csv(const Eigen::MatrixXd& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char buf[64];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
            out << buf << (j + 1 < m.cols() ? "," : "");
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace ggm
