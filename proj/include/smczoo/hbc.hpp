#pragma once

#include "smczoo/dataio.hpp"
#include "smczoo/sgd.hpp"
#include "smczoo/types.hpp"

#include <utility>

namespace smczoo {

enum class HbcFamily { Svm, Tsvm, Iftsvm, Lssvm, Lstsvm, LinexSvm, PinSvm, PinGtsvm };
enum class KernelType { Linear, Gaussian };

struct HbcHyper {
    double C = 1.0;
    double C1 = 1.0, C2 = 1.0;
    double sigma = 1.0;
    double tau = 0.0, tau1 = 0.0, tau2 = 0.0;
    double a = -1.0;        // Linex loss parameter (negative)
    double mu = 1.0;        // IF kernel parameter
    SgdParams sgd;          // Linex only
    KernelType kernel = KernelType::Linear;
};

struct TrainedHbc {
    HbcFamily family = HbcFamily::Svm;
    HbcHyper hyper;
    std::uint64_t seed = 0;
    int input_dim = 0;
    bool qp_converged = true;

    // single-plane families (SVM, LSSVM, Linex, Pin-SVM)
    Vector w;        // linear weight (linear kernel)
    Vector coeff;    // kernel expansion coefficients on `support`
    double b = 0.0;
    Matrix support;  // retained training points (kernel variants)

    // twin families: two plane descriptions
    Vector w_pos, w_neg;  // weights (linear) or basis coefficients (kernel)
    double b_pos = 0.0, b_neg = 0.0;
    double wnorm_pos = 1.0, wnorm_neg = 1.0;
    Matrix basis;         // kernel twin basis (all training points)

    // diagnostics
    Vector alpha;  // dual variables of the (first) QP
};

TrainedHbc train_svm(const Dataset& train, const HbcHyper& h, std::uint64_t seed);
TrainedHbc train_tsvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed);
/// TSVM with caller-supplied per-sample slack weights (IFTSVM path).
TrainedHbc train_tsvm_weighted(const Dataset& train, const HbcHyper& h, std::uint64_t seed,
                               const VectorRef& pos_weights, const VectorRef& neg_weights,
                               HbcFamily family_tag = HbcFamily::Tsvm);
TrainedHbc train_iftsvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed);
TrainedHbc train_lssvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed);
TrainedHbc train_lstsvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed);
TrainedHbc train_linex_svm(const Dataset& train, const HbcHyper& h, std::uint64_t seed);
TrainedHbc train_pin_svm(const Dataset& train, const HbcHyper& h, std::uint64_t seed);
TrainedHbc train_pin_gtsvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed);

TrainedHbc train_hbc(const Dataset& train, HbcFamily f, const HbcHyper& h, std::uint64_t seed);

/// Margin-style decision values (single plane) or the normalised
/// plane-distance difference (twin). labels = sign(score), 0 -> +1.
std::pair<Vector, Vector> predict_hbc(const TrainedHbc& model, const MatrixRef& X);

/// Linex loss e^{au} - au - 1 and its derivative.
double linex_loss(double a, double u);
double linex_loss_grad(double a, double u);

}  // namespace smczoo
