#pragma once

#include "smczoo/dataio.hpp"
#include "smczoo/types.hpp"

#include <utility>
#include <vector>

namespace smczoo {

enum class RnnVariant {
    Rvfl,
    Elm,
    Mcvelm,         // intraclass-variance ELM
    Mvelm,          // total-variance ELM
    Ifrvfl,
    ClassVarRvfl,
    TotalVarRvfl,
    GeelmLda,
    GeelmLfda,
    Drvfl,
    Edrvfl,
    Bls,
    Nfbls,
};

enum class ScatterKind { Intraclass, Total };
enum class GraphKind { Lda, Lfda };

struct RnnHyper {
    double C = 1.0;        // regularisation
    int N = 100;           // hidden nodes per layer
    int act = 3;           // activation index 1..9
    double lambda = 0.0;   // variance / graph regularisation
    double mu = 1.0;       // IF kernel parameter
    int L = 1;             // layer count (dRVFL / edRVFL)
    int n_feat_groups = 10;
    int n_feat_nodes = 10;
    int n_enh_groups = 10;
    int n_enh_nodes = 1;
};

struct RnnLayer {
    Matrix W;
    Vector b;
};

struct TrainedRnn {
    RnnVariant variant = RnnVariant::Rvfl;
    RnnHyper hyper;
    std::uint64_t seed = 0;
    int input_dim = 0;

    std::vector<RnnLayer> layers;           // hidden stack / BLS groups
    std::vector<RnnLayer> enhancement;      // BLS / NF-BLS enhancement groups
    std::vector<Matrix> fuzzy_centers;      // NF-BLS rule centres per group
    std::vector<Matrix> fuzzy_consequents;  // NF-BLS consequent vectors per group
    std::vector<Matrix> betas;              // one block; L blocks for edRVFL
};

TrainedRnn train_rvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed);
TrainedRnn train_elm(const Dataset& train, const RnnHyper& h, std::uint64_t seed);
TrainedRnn train_variance_elm(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                              ScatterKind scatter);
TrainedRnn train_variance_rvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                               ScatterKind scatter);
TrainedRnn train_ifrvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed);
/// IFRVFL with caller-supplied sample weights (the if_score path uses this).
TrainedRnn train_ifrvfl_weighted(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                                 const VectorRef& weights);
TrainedRnn train_geelm(const Dataset& train, const RnnHyper& h, std::uint64_t seed,
                       GraphKind graph);
TrainedRnn train_drvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed);
TrainedRnn train_edrvfl(const Dataset& train, const RnnHyper& h, std::uint64_t seed);
TrainedRnn train_bls(const Dataset& train, const RnnHyper& h, std::uint64_t seed);
TrainedRnn train_nfbls(const Dataset& train, const RnnHyper& h, std::uint64_t seed);

TrainedRnn train_rnn(const Dataset& train, RnnVariant v, const RnnHyper& h, std::uint64_t seed);

/// labels = sign(scores) with 0 mapped to +1; edRVFL labels are the
/// per-layer majority vote and scores the mean layer score.
std::pair<Vector, Vector> predict(const TrainedRnn& model, const MatrixRef& X);

/// Graph Laplacians used by GEELM (exposed for testing).
Matrix lda_laplacian(const VectorRef& labels);
Matrix lfda_laplacian(const MatrixRef& H, const VectorRef& labels, int k_neighbors = 7);

}  // namespace smczoo
