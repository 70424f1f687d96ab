#include "smczoo/rnn.hpp"

#include "smczoo/activations.hpp"
#include "smczoo/fuzzy.hpp"
#include "smczoo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smczoo {

namespace {

// Stream order per layer: W (row-major) before b.
RnnLayer make_layer(std::uint64_t seed, std::uint64_t stream, Eigen::Index in_dim,
                    Eigen::Index out_dim) {
    RngStream rng(seed, stream);
    RnnLayer layer;
    layer.W = rng.uniform_matrix(in_dim, out_dim);
    layer.b = rng.uniform_vector(out_dim);
    return layer;
}

Matrix layer_output(const RnnLayer& layer, int act, const MatrixRef& X) {
    Matrix pre = (X * layer.W).rowwise() + layer.b.transpose();
    return apply_activation(act, pre);
}

Matrix hstack(const Matrix& A, const Matrix& B) {
    Matrix out(A.rows(), A.cols() + B.cols());
    out << A, B;
    return out;
}

void require_both_classes(const Dataset& ds, const char* who) {
    bool pos = false, neg = false;
    for (Eigen::Index i = 0; i < ds.n(); ++i) (ds.labels(i) > 0 ? pos : neg) = true;
    if (!pos || !neg) throw std::runtime_error(std::string(who) + ": both classes required");
}

// beta = (D'D*C + I + lambda*S)^-1 D'Y*C; S optional extra quadratic term.
Matrix penalized_solve(const Matrix& D, const Vector& Y, double C, double lambda,
                       const Matrix* S) {
    Matrix G = D.transpose() * D * C;
    G.diagonal().array() += 1.0;
    if (S && lambda != 0.0) G += lambda * (*S);
    Matrix rhs = D.transpose() * Y * C;
    Matrix beta = G.ldlt().solve(rhs);
    if (!beta.allFinite()) throw std::runtime_error("rnn: singular regularised system");
    return beta;
}

Matrix scatter_matrix(const Matrix& D, const Vector& labels, ScatterKind kind) {
    const Eigen::Index d = D.cols();
    Matrix S = Matrix::Zero(d, d);
    if (kind == ScatterKind::Total) {
        Vector mean = D.colwise().mean();
        Matrix centered = D.rowwise() - mean.transpose();
        S = centered.transpose() * centered;
    } else {
        for (double cls : {1.0, -1.0}) {
            std::vector<Eigen::Index> members;
            for (Eigen::Index i = 0; i < D.rows(); ++i)
                if ((labels(i) > 0) == (cls > 0)) members.push_back(i);
            if (members.empty()) continue;
            Vector mean = Vector::Zero(d);
            for (auto i : members) mean += D.row(i).transpose();
            mean /= static_cast<double>(members.size());
            for (auto i : members) {
                Vector c = D.row(i).transpose() - mean;
                S.selfadjointView<Eigen::Lower>().rankUpdate(c);
            }
        }
        S = S.selfadjointView<Eigen::Lower>();
    }
    return S;
}

TrainedRnn single_layer_fit(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                            RnnVariant variant, bool direct_links,
                            const Matrix* quad_penalty, const Vector* sample_weights) {
    if (h.N < 1) throw std::invalid_argument("rnn: N must be >= 1");
    TrainedRnn m;
    m.variant = variant;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());
    m.layers.push_back(make_layer(seed, 0, train.dim(), h.N));

    Matrix H = layer_output(m.layers[0], h.act, train.features);
    Matrix D = direct_links ? hstack(train.features, H) : H;
    const Vector& Y = train.labels;

    if (sample_weights) {
        if (sample_weights->size() != D.rows())
            throw std::invalid_argument("rnn: weight length mismatch");
        if (sample_weights->maxCoeff() <= 0.0)
            throw std::runtime_error("rnn: all sample weights zero");
        Matrix Dw = sample_weights->asDiagonal() * D;
        Matrix G = D.transpose() * Dw * h.C;
        G.diagonal().array() += 1.0;
        Vector rhs = D.transpose() * (sample_weights->asDiagonal() * Y) * h.C;
        m.betas.push_back(G.ldlt().solve(rhs));
    } else if (quad_penalty) {
        m.betas.push_back(penalized_solve(D, Y, h.C, h.lambda, quad_penalty));
    } else {
        m.betas.push_back(ridge_solve(D, Y, h.C));
    }
    if (!m.betas.back().allFinite()) throw std::runtime_error("rnn: non-finite solution");
    return m;
}

bool uses_direct_links(RnnVariant v) {
    switch (v) {
        case RnnVariant::Rvfl:
        case RnnVariant::Ifrvfl:
        case RnnVariant::ClassVarRvfl:
        case RnnVariant::TotalVarRvfl:
        case RnnVariant::Drvfl:
        case RnnVariant::Edrvfl:
            return true;
        default:
            return false;
    }
}

// Chained hidden stack shared by dRVFL and edRVFL.
std::vector<Matrix> hidden_stack(const TrainedRnn& m, const MatrixRef& X) {
    std::vector<Matrix> hs;
    hs.reserve(m.layers.size());
    const Matrix* prev = nullptr;
    for (const auto& layer : m.layers) {
        Matrix h = layer_output(layer, m.hyper.act, prev ? MatrixRef(*prev) : MatrixRef(X));
        hs.push_back(std::move(h));
        prev = &hs.back();
    }
    return hs;
}

Matrix bls_design(const TrainedRnn& m, const MatrixRef& X) {
    const Eigen::Index n = X.rows();
    Matrix Z(n, static_cast<Eigen::Index>(m.layers.size()) * m.hyper.n_feat_nodes);
    Eigen::Index col = 0;
    for (const auto& g : m.layers) {
        Z.middleCols(col, m.hyper.n_feat_nodes) = layer_output(g, m.hyper.act, X);
        col += m.hyper.n_feat_nodes;
    }
    Matrix H(n, static_cast<Eigen::Index>(m.enhancement.size()) * m.hyper.n_enh_nodes);
    col = 0;
    for (const auto& g : m.enhancement) {
        H.middleCols(col, m.hyper.n_enh_nodes) = layer_output(g, m.hyper.act, Z);
        col += m.hyper.n_enh_nodes;
    }
    return hstack(Z, H);
}

// NF-BLS fuzzy block: per group, normalised Gaussian firing strengths times
// random linear consequents of the input.
Matrix nfbls_fuzzy_block(const TrainedRnn& m, const MatrixRef& X) {
    const Eigen::Index n = X.rows();
    const int nodes = m.hyper.n_feat_nodes;
    Matrix Z(n, static_cast<Eigen::Index>(m.fuzzy_centers.size()) * nodes);
    Eigen::Index col = 0;
    for (std::size_t g = 0; g < m.fuzzy_centers.size(); ++g) {
        const Matrix& centers = m.fuzzy_centers[g];       // nodes x d
        const Matrix& conseq = m.fuzzy_consequents[g];    // d x nodes
        for (Eigen::Index i = 0; i < n; ++i) {
            Vector tau(nodes);
            for (int r = 0; r < nodes; ++r) {
                const double d2 = (X.row(i) - centers.row(r)).squaredNorm();
                tau(r) = std::exp(-d2);
            }
            double s = tau.sum();
            if (s < 1e-300) {
                tau.setConstant(1.0 / nodes);
            } else {
                tau /= s;
            }
            for (int r = 0; r < nodes; ++r)
                Z(i, col + r) = tau(r) * X.row(i).dot(conseq.col(r));
        }
        col += nodes;
    }
    return Z;
}

Matrix nfbls_design(const TrainedRnn& m, const MatrixRef& X) {
    Matrix Z = nfbls_fuzzy_block(m, X);
    const Eigen::Index n = X.rows();
    Matrix H(n, static_cast<Eigen::Index>(m.enhancement.size()) * m.hyper.n_enh_nodes);
    Eigen::Index col = 0;
    for (const auto& g : m.enhancement) {
        H.middleCols(col, m.hyper.n_enh_nodes) = layer_output(g, m.hyper.act, Z);
        col += m.hyper.n_enh_nodes;
    }
    return hstack(Z, H);
}

// Seeded k-means (Lloyd) used for NF-BLS rule centres.
Matrix kmeans_centers(const MatrixRef& X, int k, std::uint64_t seed, std::uint64_t stream) {
    const Eigen::Index n = X.rows();
    if (k > n) throw std::runtime_error("nfbls: more rule centres than samples");
    for (int attempt = 0; attempt < 5; ++attempt) {
        RngStream rng(seed, stream * 31 + static_cast<std::uint64_t>(attempt));
        std::vector<int> order = iota_indices(static_cast<int>(n));
        rng.shuffle(order);
        Matrix centers(k, X.cols());
        for (int c = 0; c < k; ++c) centers.row(c) = X.row(order[static_cast<std::size_t>(c)]);

        std::vector<int> assign(static_cast<std::size_t>(n), 0);
        bool empty_cluster = false;
        for (int iter = 0; iter < 25; ++iter) {
            bool changed = false;
            for (Eigen::Index i = 0; i < n; ++i) {
                int best = 0;
                double best_d = (X.row(i) - centers.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    const double d = (X.row(i) - centers.row(c)).squaredNorm();
                    if (d < best_d) {
                        best_d = d;
                        best = c;
                    }
                }
                if (assign[static_cast<std::size_t>(i)] != best) {
                    assign[static_cast<std::size_t>(i)] = best;
                    changed = true;
                }
            }
            Matrix sums = Matrix::Zero(k, X.cols());
            std::vector<int> counts(static_cast<std::size_t>(k), 0);
            for (Eigen::Index i = 0; i < n; ++i) {
                sums.row(assign[static_cast<std::size_t>(i)]) += X.row(i);
                ++counts[static_cast<std::size_t>(assign[static_cast<std::size_t>(i)])];
            }
            empty_cluster = false;
            for (int c = 0; c < k; ++c) {
                if (counts[static_cast<std::size_t>(c)] == 0) {
                    empty_cluster = true;
                    break;
                }
                centers.row(c) = sums.row(c) / counts[static_cast<std::size_t>(c)];
            }
            if (empty_cluster || !changed) break;
        }
        if (!empty_cluster) return centers;
    }
    throw std::runtime_error("nfbls: k-means kept producing empty clusters");
}

}  // namespace

Matrix lda_laplacian(const VectorRef& labels) {
    const Eigen::Index n = labels.size();
    Matrix W = Matrix::Zero(n, n);
    for (double cls : {1.0, -1.0}) {
        std::vector<Eigen::Index> members;
        for (Eigen::Index i = 0; i < n; ++i)
            if ((labels(i) > 0) == (cls > 0)) members.push_back(i);
        if (members.empty()) continue;
        const double w = 1.0 / static_cast<double>(members.size());
        for (auto i : members)
            for (auto j : members) W(i, j) = w;
    }
    Matrix L = -W;
    L.diagonal() += W.rowwise().sum();
    return L;
}

Matrix lfda_laplacian(const MatrixRef& H, const VectorRef& labels, int k_neighbors) {
    const Eigen::Index n = H.rows();
    if (labels.size() != n) throw std::invalid_argument("lfda_laplacian: label mismatch");
    const int k = std::min<int>(k_neighbors, static_cast<int>(n) - 1);

    Matrix d2(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) d2(i, j) = (H.row(i) - H.row(j)).squaredNorm();

    // local scale: distance to the k-th neighbour
    Vector scale(n);
    std::vector<std::vector<Eigen::Index>> knn(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        std::vector<Eigen::Index> order;
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return d2(i, a) < d2(i, b); });
        order.resize(static_cast<std::size_t>(k));
        knn[static_cast<std::size_t>(i)] = order;
        scale(i) = std::max(std::sqrt(d2(i, order.back())), 1e-12);
    }

    Matrix W = Matrix::Zero(n, n);
    std::vector<Eigen::Index> class_count(2, 0);
    for (Eigen::Index i = 0; i < n; ++i) ++class_count[labels(i) > 0 ? 0 : 1];
    for (Eigen::Index i = 0; i < n; ++i) {
        for (auto j : knn[static_cast<std::size_t>(i)]) {
            if ((labels(i) > 0) != (labels(j) > 0)) continue;
            const double nc =
                static_cast<double>(class_count[labels(i) > 0 ? 0 : 1]);
            const double a = std::exp(-d2(i, j) / (scale(i) * scale(j))) / nc;
            W(i, j) = std::max(W(i, j), a);
            W(j, i) = W(i, j);  // symmetrised kNN graph
        }
    }
    Matrix L = -W;
    L.diagonal() += W.rowwise().sum();
    return L;
}

TrainedRnn train_rvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed) {
    return single_layer_fit(train, h, seed, RnnVariant::Rvfl, true, nullptr, nullptr);
}

TrainedRnn train_elm(const Dataset& train, const RnnHyper& h, std::uint64_t seed) {
    return single_layer_fit(train, h, seed, RnnVariant::Elm, false, nullptr, nullptr);
}

TrainedRnn train_variance_elm(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                              ScatterKind scatter) {
    require_both_classes(train, "train_variance_elm");
    const RnnVariant v =
        scatter == ScatterKind::Intraclass ? RnnVariant::Mcvelm : RnnVariant::Mvelm;
    RnnLayer layer = make_layer(seed, 0, train.dim(), h.N);
    Matrix H = layer_output(layer, h.act, train.features);
    Matrix S = scatter_matrix(H, train.labels, scatter);
    TrainedRnn m = single_layer_fit(train, h, seed, v, false, &S, nullptr);
    return m;
}

TrainedRnn train_variance_rvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                               ScatterKind scatter) {
    require_both_classes(train, "train_variance_rvfl");
    const RnnVariant v =
        scatter == ScatterKind::Intraclass ? RnnVariant::ClassVarRvfl : RnnVariant::TotalVarRvfl;
    RnnLayer layer = make_layer(seed, 0, train.dim(), h.N);
    Matrix D = hstack(train.features, layer_output(layer, h.act, train.features));
    Matrix S = scatter_matrix(D, train.labels, scatter);
    return single_layer_fit(train, h, seed, v, true, &S, nullptr);
}

TrainedRnn train_ifrvfl_weighted(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                                 const VectorRef& weights) {
    Vector w = weights;
    return single_layer_fit(train, h, seed, RnnVariant::Ifrvfl, true, nullptr, &w);
}

TrainedRnn train_ifrvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed) {
    require_both_classes(train, "train_ifrvfl");
    Vector scores = if_score_values(train.features, train.labels, h.mu);
    return train_ifrvfl_weighted(train, h, seed, scores);
}

TrainedRnn train_geelm(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                       GraphKind graph) {
    require_both_classes(train, "train_geelm");
    const RnnVariant v = graph == GraphKind::Lda ? RnnVariant::GeelmLda : RnnVariant::GeelmLfda;
    RnnLayer layer = make_layer(seed, 0, train.dim(), h.N);
    Matrix H = layer_output(layer, h.act, train.features);
    Matrix L = graph == GraphKind::Lda ? lda_laplacian(train.labels)
                                       : lfda_laplacian(H, train.labels);
    Matrix S = H.transpose() * L * H;
    return single_layer_fit(train, h, seed, v, false, &S, nullptr);
}

TrainedRnn train_drvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed) {
    if (h.L < 1) throw std::invalid_argument("train_drvfl: L must be >= 1");
    TrainedRnn m;
    m.variant = RnnVariant::Drvfl;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());
    for (int l = 0; l < h.L; ++l)
        m.layers.push_back(make_layer(seed, static_cast<std::uint64_t>(l),
                                      l == 0 ? train.dim() : h.N, h.N));
    auto hs = hidden_stack(m, train.features);
    Matrix D = train.features;
    for (const auto& hmat : hs) D = hstack(D, hmat);
    m.betas.push_back(ridge_solve(D, train.labels, h.C));
    return m;
}

TrainedRnn train_edrvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed) {
    if (h.L < 1) throw std::invalid_argument("train_edrvfl: L must be >= 1");
    TrainedRnn m;
    m.variant = RnnVariant::Edrvfl;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());
    for (int l = 0; l < h.L; ++l)
        m.layers.push_back(make_layer(seed, static_cast<std::uint64_t>(l),
                                      l == 0 ? train.dim() : h.N, h.N));
    auto hs = hidden_stack(m, train.features);
    for (const auto& hmat : hs) {
        Matrix D = hstack(train.features, hmat);
        m.betas.push_back(ridge_solve(D, train.labels, h.C));
    }
    return m;
}

TrainedRnn train_bls(const Dataset& train, const RnnHyper& h, std::uint64_t seed) {
    if (h.n_feat_groups < 1 || h.n_feat_nodes < 1 || h.n_enh_groups < 1 || h.n_enh_nodes < 1)
        throw std::invalid_argument("train_bls: group/node counts must be >= 1");
    TrainedRnn m;
    m.variant = RnnVariant::Bls;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());
    for (int g = 0; g < h.n_feat_groups; ++g)
        m.layers.push_back(make_layer(seed, static_cast<std::uint64_t>(g), train.dim(),
                                      h.n_feat_nodes));
    const Eigen::Index z_dim =
        static_cast<Eigen::Index>(h.n_feat_groups) * h.n_feat_nodes;
    for (int g = 0; g < h.n_enh_groups; ++g)
        m.enhancement.push_back(make_layer(seed, 1000 + static_cast<std::uint64_t>(g), z_dim,
                                           h.n_enh_nodes));
    Matrix D = bls_design(m, train.features);
    m.betas.push_back(ridge_solve(D, train.labels, h.C));
    return m;
}

TrainedRnn train_nfbls(const Dataset& train, const RnnHyper& h, std::uint64_t seed) {
    if (h.n_feat_groups < 1 || h.n_feat_nodes < 1 || h.n_enh_groups < 1 || h.n_enh_nodes < 1)
        throw std::invalid_argument("train_nfbls: group/node counts must be >= 1");
    TrainedRnn m;
    m.variant = RnnVariant::Nfbls;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());
    for (int g = 0; g < h.n_feat_groups; ++g) {
        m.fuzzy_centers.push_back(
            kmeans_centers(train.features, h.n_feat_nodes, seed, static_cast<std::uint64_t>(g)));
        RngStream rng(seed, 2000 + static_cast<std::uint64_t>(g));
        m.fuzzy_consequents.push_back(rng.uniform_matrix(train.dim(), h.n_feat_nodes));
    }
    const Eigen::Index z_dim =
        static_cast<Eigen::Index>(h.n_feat_groups) * h.n_feat_nodes;
    for (int g = 0; g < h.n_enh_groups; ++g)
        m.enhancement.push_back(make_layer(seed, 1000 + static_cast<std::uint64_t>(g), z_dim,
                                           h.n_enh_nodes));
    Matrix D = nfbls_design(m, train.features);
    m.betas.push_back(ridge_solve(D, train.labels, h.C));
    return m;
}

TrainedRnn train_rnn(const Dataset& train, RnnVariant v, const RnnHyper& h, std::uint64_t seed) {
    switch (v) {
        case RnnVariant::Rvfl: return train_rvfl(train, h, seed);
        case RnnVariant::Elm: return train_elm(train, h, seed);
        case RnnVariant::Mcvelm: return train_variance_elm(train, h, seed, ScatterKind::Intraclass);
        case RnnVariant::Mvelm: return train_variance_elm(train, h, seed, ScatterKind::Total);
        case RnnVariant::Ifrvfl: return train_ifrvfl(train, h, seed);
        case RnnVariant::ClassVarRvfl:
            return train_variance_rvfl(train, h, seed, ScatterKind::Intraclass);
        case RnnVariant::TotalVarRvfl:
            return train_variance_rvfl(train, h, seed, ScatterKind::Total);
        case RnnVariant::GeelmLda: return train_geelm(train, h, seed, GraphKind::Lda);
        case RnnVariant::GeelmLfda: return train_geelm(train, h, seed, GraphKind::Lfda);
        case RnnVariant::Drvfl: return train_drvfl(train, h, seed);
        case RnnVariant::Edrvfl: return train_edrvfl(train, h, seed);
        case RnnVariant::Bls: return train_bls(train, h, seed);
        case RnnVariant::Nfbls: return train_nfbls(train, h, seed);
    }
    throw std::invalid_argument("train_rnn: unknown variant");
}

std::pair<Vector, Vector> predict(const TrainedRnn& m, const MatrixRef& X) {
    if (X.cols() != m.input_dim)
        throw std::invalid_argument("rnn predict: feature dimension mismatch");
    const Eigen::Index n = X.rows();
    if (n == 0) return {Vector(), Vector()};

    Vector scores;
    Vector labels(n);

    switch (m.variant) {
        case RnnVariant::Edrvfl: {
            auto hs = hidden_stack(m, X);
            Matrix layer_scores(n, static_cast<Eigen::Index>(hs.size()));
            for (std::size_t l = 0; l < hs.size(); ++l) {
                Matrix D = hstack(Matrix(X), hs[l]);
                layer_scores.col(static_cast<Eigen::Index>(l)) = D * m.betas[l];
            }
            scores = layer_scores.rowwise().mean();
            for (Eigen::Index i = 0; i < n; ++i) {
                int votes = 0;
                for (Eigen::Index l = 0; l < layer_scores.cols(); ++l)
                    votes += layer_scores(i, l) >= 0.0 ? 1 : -1;
                labels(i) = votes >= 0 ? 1.0 : -1.0;
            }
            return {labels, scores};
        }
        case RnnVariant::Drvfl: {
            auto hs = hidden_stack(m, X);
            Matrix D = X;
            for (const auto& hmat : hs) D = hstack(D, hmat);
            scores = D * m.betas[0];
            break;
        }
        case RnnVariant::Bls:
            scores = bls_design(m, X) * m.betas[0];
            break;
        case RnnVariant::Nfbls:
            scores = nfbls_design(m, X) * m.betas[0];
            break;
        default: {
            Matrix H = layer_output(m.layers[0], m.hyper.act, X);
            Matrix D = uses_direct_links(m.variant) ? hstack(Matrix(X), H) : H;
            scores = D * m.betas[0];
            break;
        }
    }
    for (Eigen::Index i = 0; i < n; ++i) labels(i) = scores(i) >= 0.0 ? 1.0 : -1.0;
    return {labels, scores};
}

}  // namespace smczoo
