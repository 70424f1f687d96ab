#include "smczoo/hbc.hpp"

#include "smczoo/fuzzy.hpp"
#include "smczoo/kernels.hpp"
#include "smczoo/qp.hpp"

#include <Eigen/LU>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace smczoo {

namespace {

constexpr double kTwinJitter = 1e-7;
constexpr double kQpTol = 1e-8;
constexpr int kQpMaxIter = 40000;

Matrix kernel_or_linear(const HbcHyper& h, const MatrixRef& X, const MatrixRef& Y) {
    if (h.kernel == KernelType::Gaussian) return gaussian_kernel(X, Y, h.sigma);
    return X * Y.transpose();
}

void split_classes(const Dataset& ds, std::vector<int>& pos, std::vector<int>& neg) {
    for (Eigen::Index i = 0; i < ds.n(); ++i)
        (ds.labels(i) > 0 ? pos : neg).push_back(static_cast<int>(i));
    if (pos.empty() || neg.empty())
        throw std::runtime_error("hbc: both classes required");
}

Matrix take_rows(const MatrixRef& X, const std::vector<int>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), X.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
    return out;
}

// Soft-margin dual with pinball lower bound -tau*C (tau=0 is the hinge SVM).
TrainedHbc svm_dual_fit(const Dataset& train, const HbcHyper& h, std::uint64_t seed,
                        HbcFamily family, double tau) {
    std::vector<int> pos, neg;
    split_classes(train, pos, neg);

    const Eigen::Index n = train.n();
    const Vector& y = train.labels;
    Matrix K = kernel_or_linear(h, train.features, train.features);

    QpProblem qp;
    qp.Q = K.cwiseProduct(y * y.transpose());
    qp.q = Vector::Constant(n, -1.0);
    qp.lower = Vector::Constant(n, -tau * h.C);
    qp.upper = Vector::Constant(n, h.C);
    qp.eq_a = y;
    qp.eq_b = 0.0;

    QpResult sol = box_qp_solve(qp, kQpTol, kQpMaxIter);

    TrainedHbc m;
    m.family = family;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());
    m.qp_converged = sol.converged;
    m.alpha = sol.x;

    Vector ay = sol.x.cwiseProduct(y);
    Vector f_nob = K * ay;

    // bias from KKT-interior support vectors; box-midpoint fallback
    const double band = std::max(1e-8 * h.C, 1e-12);
    double b_sum = 0.0;
    int b_count = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (sol.x(i) > qp.lower(i) + band && sol.x(i) < qp.upper(i) - band) {
            b_sum += y(i) - f_nob(i);
            ++b_count;
        }
    }
    if (b_count > 0) {
        m.b = b_sum / b_count;
    } else {
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i) {
            const double target = y(i) - f_nob(i);
            // alpha at lower bound: y_i f(x_i) >= 1; at upper: <= 1
            const bool at_lower = sol.x(i) <= qp.lower(i) + band;
            if (at_lower) {
                if (y(i) > 0) lo = std::max(lo, target);
                else hi = std::min(hi, target);
            } else {
                if (y(i) > 0) hi = std::min(hi, target);
                else lo = std::max(lo, target);
            }
        }
        if (std::isfinite(lo) && std::isfinite(hi)) m.b = 0.5 * (lo + hi);
        else if (std::isfinite(lo)) m.b = lo;
        else if (std::isfinite(hi)) m.b = hi;
        else m.b = 0.0;
    }

    if (h.kernel == KernelType::Linear) {
        m.w = train.features.transpose() * ay;
    } else {
        m.support = train.features;
        m.coeff = ay;
    }
    return m;
}

struct TwinPlane {
    Vector z;       // [w; b]
    double wnorm;   // norm of the plane normal in the working space
    bool converged;
    Vector alpha;
};

// One TSVM-style plane: min 0.5||S z||^2 + C sum pin(slack on R side),
// dual  min 0.5 a' R M R' a - e'a,  bounds [lo_i, up_i],  z = sign * M R' a.
TwinPlane twin_plane(const Matrix& S, const Matrix& R, const Vector& lo, const Vector& up,
                     double flip_sign, const Matrix* gram_basis) {
    Matrix StS = S.transpose() * S;
    StS.diagonal().array() += kTwinJitter;
    Eigen::LDLT<Matrix> ldlt(StS);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("hbc twin: singular block despite jitter");

    Matrix MRt = ldlt.solve(R.transpose());

    QpProblem qp;
    qp.Q = R * MRt;
    qp.Q = 0.5 * (qp.Q + qp.Q.transpose());  // symmetrise rounding noise
    qp.q = Vector::Constant(R.rows(), -1.0);
    qp.lower = lo;
    qp.upper = up;

    QpResult sol = box_qp_solve(qp, kQpTol, kQpMaxIter);

    TwinPlane out;
    out.z = flip_sign * (MRt * sol.x);
    out.converged = sol.converged;
    out.alpha = sol.x;
    const Eigen::Index dim = out.z.size() - 1;  // last entry is the bias
    if (gram_basis) {
        Vector u = out.z.head(dim);
        out.wnorm = std::sqrt(std::max(u.dot(*gram_basis * u), 1e-300));
    } else {
        out.wnorm = std::max(out.z.head(dim).norm(), 1e-300);
    }
    return out;
}

Matrix with_ones(const Matrix& X) {
    Matrix out(X.rows(), X.cols() + 1);
    out << X, Matrix::Ones(X.rows(), 1);
    return out;
}

TrainedHbc twin_fit(const Dataset& train, const HbcHyper& h, std::uint64_t seed,
                    HbcFamily family, double tau1, double tau2, const Vector* pos_w,
                    const Vector* neg_w) {
    std::vector<int> pos, neg;
    split_classes(train, pos, neg);

    Matrix A = take_rows(train.features, pos);
    Matrix B = take_rows(train.features, neg);

    TrainedHbc m;
    m.family = family;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());

    Matrix gram;
    const Matrix* gram_ptr = nullptr;
    Matrix Sa, Sb;
    if (h.kernel == KernelType::Gaussian) {
        m.basis = train.features;
        Sa = with_ones(gaussian_kernel(A, m.basis, h.sigma));
        Sb = with_ones(gaussian_kernel(B, m.basis, h.sigma));
        gram = gaussian_kernel(m.basis, m.basis, h.sigma);
        gram_ptr = &gram;
    } else {
        Sa = with_ones(A);
        Sb = with_ones(B);
    }

    // plane 1 hugs the positive class, slack C1 on negative samples
    Vector up1(B.rows()), lo1(B.rows());
    for (Eigen::Index i = 0; i < B.rows(); ++i) {
        const double ci = h.C1 * (neg_w ? (*neg_w)(i) : 1.0);
        up1(i) = ci;
        lo1(i) = -tau1 * ci;
    }
    TwinPlane p1 = twin_plane(Sa, Sb, lo1, up1, -1.0, gram_ptr);

    Vector up2(A.rows()), lo2(A.rows());
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        const double ci = h.C2 * (pos_w ? (*pos_w)(i) : 1.0);
        up2(i) = ci;
        lo2(i) = -tau2 * ci;
    }
    TwinPlane p2 = twin_plane(Sb, Sa, lo2, up2, 1.0, gram_ptr);

    const Eigen::Index dim = p1.z.size() - 1;
    m.w_pos = p1.z.head(dim);
    m.b_pos = p1.z(dim);
    m.wnorm_pos = p1.wnorm;
    m.w_neg = p2.z.head(dim);
    m.b_neg = p2.z(dim);
    m.wnorm_neg = p2.wnorm;
    m.qp_converged = p1.converged && p2.converged;
    m.alpha = p1.alpha;
    return m;
}

}  // namespace

double linex_loss(double a, double u) {
    const double au = std::min(a * u, 60.0);
    return std::exp(au) - a * u - 1.0;
}

double linex_loss_grad(double a, double u) {
    const double au = std::min(a * u, 60.0);
    return a * (std::exp(au) - 1.0);
}

TrainedHbc train_svm(const Dataset& train, const HbcHyper& h, std::uint64_t seed) {
    return svm_dual_fit(train, h, seed, HbcFamily::Svm, 0.0);
}

TrainedHbc train_pin_svm(const Dataset& train, const HbcHyper& h, std::uint64_t seed) {
    if (h.tau < 0.0 || h.tau > 1.0)
        throw std::invalid_argument("train_pin_svm: tau must be in [0,1]");
    return svm_dual_fit(train, h, seed, HbcFamily::PinSvm, h.tau);
}

TrainedHbc train_tsvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed) {
    return twin_fit(train, h, seed, HbcFamily::Tsvm, 0.0, 0.0, nullptr, nullptr);
}

TrainedHbc train_tsvm_weighted(const Dataset& train, const HbcHyper& h, std::uint64_t seed,
                               const VectorRef& pos_weights, const VectorRef& neg_weights,
                               HbcFamily family_tag) {
    Vector pw = pos_weights, nw = neg_weights;
    return twin_fit(train, h, seed, family_tag, 0.0, 0.0, &pw, &nw);
}

TrainedHbc train_iftsvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed) {
    std::vector<int> pos, neg;
    split_classes(train, pos, neg);
    Vector scores = if_score_values(train.features, train.labels, h.mu);
    Vector pw(static_cast<Eigen::Index>(pos.size())), nw(static_cast<Eigen::Index>(neg.size()));
    for (std::size_t i = 0; i < pos.size(); ++i) pw(static_cast<Eigen::Index>(i)) = scores(pos[i]);
    for (std::size_t i = 0; i < neg.size(); ++i) nw(static_cast<Eigen::Index>(i)) = scores(neg[i]);
    return train_tsvm_weighted(train, h, seed, pw, nw, HbcFamily::Iftsvm);
}

TrainedHbc train_pin_gtsvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed) {
    if (h.tau1 < 0.0 || h.tau1 > 1.0 || h.tau2 < 0.0 || h.tau2 > 1.0)
        throw std::invalid_argument("train_pin_gtsvm: tau must be in [0,1]");
    return twin_fit(train, h, seed, HbcFamily::PinGtsvm, h.tau1, h.tau2, nullptr, nullptr);
}

TrainedHbc train_lssvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed) {
    std::vector<int> pos, neg;
    split_classes(train, pos, neg);
    const Eigen::Index n = train.n();
    const Vector& y = train.labels;
    Matrix K = kernel_or_linear(h, train.features, train.features);

    Matrix Sys = Matrix::Zero(n + 1, n + 1);
    Sys.block(0, 1, 1, n) = y.transpose();
    Sys.block(1, 0, n, 1) = y;
    Sys.block(1, 1, n, n) = K.cwiseProduct(y * y.transpose());
    Sys.block(1, 1, n, n).diagonal().array() += 1.0 / h.C;

    Vector rhs = Vector::Ones(n + 1);
    rhs(0) = 0.0;

    Vector sol = Sys.partialPivLu().solve(rhs);
    double resid = (Sys * sol - rhs).norm();
    if (!sol.allFinite() || resid > 1e-6 * std::max(1.0, rhs.norm())) {
        Sys.block(1, 1, n, n).diagonal().array() += 1e-10;  // jitter retry
        sol = Sys.partialPivLu().solve(rhs);
        resid = (Sys * sol - rhs).norm();
        if (!sol.allFinite() || resid > 1e-6 * std::max(1.0, rhs.norm()))
            throw std::runtime_error("train_lssvm: singular system");
    }

    TrainedHbc m;
    m.family = HbcFamily::Lssvm;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());
    m.b = sol(0);
    m.alpha = sol.tail(n);
    Vector ay = m.alpha.cwiseProduct(y);
    if (h.kernel == KernelType::Linear) {
        m.w = train.features.transpose() * ay;
    } else {
        m.support = train.features;
        m.coeff = ay;
    }
    return m;
}

TrainedHbc train_lstsvm(const Dataset& train, const HbcHyper& h, std::uint64_t seed) {
    std::vector<int> pos, neg;
    split_classes(train, pos, neg);
    Matrix A = take_rows(train.features, pos);
    Matrix B = take_rows(train.features, neg);

    TrainedHbc m;
    m.family = HbcFamily::Lstsvm;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());

    Matrix gram;
    Matrix Ha, Gb;
    bool kernelized = h.kernel == KernelType::Gaussian;
    if (kernelized) {
        m.basis = train.features;
        Ha = with_ones(gaussian_kernel(A, m.basis, h.sigma));
        Gb = with_ones(gaussian_kernel(B, m.basis, h.sigma));
        gram = gaussian_kernel(m.basis, m.basis, h.sigma);
    } else {
        Ha = with_ones(A);
        Gb = with_ones(B);
    }
    const Eigen::Index dim = Ha.cols();
    Vector e_neg = Vector::Ones(Gb.rows());
    Vector e_pos = Vector::Ones(Ha.rows());

    auto solve_plane = [&](const Matrix& own, const Matrix& other, double C,
                           const Vector& e, double sign) {
        Matrix M = own.transpose() * own / C + other.transpose() * other;
        M.diagonal().array() += kTwinJitter;
        Vector rhs = sign * (other.transpose() * e);
        Vector z = M.ldlt().solve(rhs);
        if (!z.allFinite() || (M * z - rhs).norm() > 1e-6 * std::max(1.0, rhs.norm()))
            throw std::runtime_error("train_lstsvm: singular system");
        return z;
    };

    Vector z1 = solve_plane(Ha, Gb, h.C1, e_neg, -1.0);
    Vector z2 = solve_plane(Gb, Ha, h.C2, e_pos, 1.0);

    m.w_pos = z1.head(dim - 1);
    m.b_pos = z1(dim - 1);
    m.w_neg = z2.head(dim - 1);
    m.b_neg = z2(dim - 1);
    if (kernelized) {
        m.wnorm_pos = std::sqrt(std::max(m.w_pos.dot(gram * m.w_pos), 1e-300));
        m.wnorm_neg = std::sqrt(std::max(m.w_neg.dot(gram * m.w_neg), 1e-300));
    } else {
        m.wnorm_pos = std::max(m.w_pos.norm(), 1e-300);
        m.wnorm_neg = std::max(m.w_neg.norm(), 1e-300);
    }
    return m;
}

TrainedHbc train_linex_svm(const Dataset& train, const HbcHyper& h, std::uint64_t seed) {
    if (!(h.a < 0.0)) throw std::invalid_argument("train_linex_svm: a must be negative");
    std::vector<int> pos, neg;
    split_classes(train, pos, neg);

    const bool kernelized = h.kernel == KernelType::Gaussian;
    Matrix Phi = kernelized ? gaussian_kernel(train.features, train.features, h.sigma)
                            : Matrix(train.features);
    const Eigen::Index n = Phi.rows();
    const Eigen::Index d = Phi.cols();
    const Vector& y = train.labels;

    const double scale_n = static_cast<double>(n);
    GradFn grad = [&](const Vector& theta, std::span<const int> batch) {
        Vector g = Vector::Zero(d + 1);
        g.head(d) = theta.head(d);  // d/dw of 0.5||w||^2, bias unregularised
        const double bsz = static_cast<double>(batch.size());
        for (int idx : batch) {
            const double f = Phi.row(idx).dot(theta.head(d)) + theta(d);
            const double u = 1.0 - y(idx) * f;
            const double lg = linex_loss_grad(h.a, u);
            g.head(d) += h.C * (scale_n / bsz) * lg * (-y(idx)) * Phi.row(idx).transpose();
            g(d) += h.C * (scale_n / bsz) * lg * (-y(idx));
        }
        return g;
    };

    SgdResult sol = sgd_momentum(grad, static_cast<int>(n), Vector::Zero(d + 1), h.sgd, seed);

    TrainedHbc m;
    m.family = HbcFamily::LinexSvm;
    m.hyper = h;
    m.seed = seed;
    m.input_dim = static_cast<int>(train.dim());
    m.qp_converged = !sol.diverged;
    if (sol.diverged) throw std::runtime_error("train_linex_svm: SGD diverged");
    m.b = sol.w(d);
    if (kernelized) {
        m.support = train.features;
        m.coeff = sol.w.head(d);
    } else {
        m.w = sol.w.head(d);
    }
    return m;
}

TrainedHbc train_hbc(const Dataset& train, HbcFamily f, const HbcHyper& h, std::uint64_t seed) {
    switch (f) {
        case HbcFamily::Svm: return train_svm(train, h, seed);
        case HbcFamily::Tsvm: return train_tsvm(train, h, seed);
        case HbcFamily::Iftsvm: return train_iftsvm(train, h, seed);
        case HbcFamily::Lssvm: return train_lssvm(train, h, seed);
        case HbcFamily::Lstsvm: return train_lstsvm(train, h, seed);
        case HbcFamily::LinexSvm: return train_linex_svm(train, h, seed);
        case HbcFamily::PinSvm: return train_pin_svm(train, h, seed);
        case HbcFamily::PinGtsvm: return train_pin_gtsvm(train, h, seed);
    }
    throw std::invalid_argument("train_hbc: unknown family");
}

std::pair<Vector, Vector> predict_hbc(const TrainedHbc& m, const MatrixRef& X) {
    if (X.cols() != m.input_dim)
        throw std::invalid_argument("predict_hbc: feature dimension mismatch");
    const Eigen::Index n = X.rows();
    if (n == 0) return {Vector(), Vector()};

    const bool twin = m.family == HbcFamily::Tsvm || m.family == HbcFamily::Iftsvm ||
                      m.family == HbcFamily::Lstsvm || m.family == HbcFamily::PinGtsvm;

    Vector scores(n);
    if (!twin) {
        if (m.support.rows() > 0) {
            Matrix K = gaussian_kernel(X, m.support, m.hyper.sigma);
            scores = K * m.coeff;
        } else {
            scores = X * m.w;
        }
        scores.array() += m.b;
    } else {
        Matrix F = m.basis.rows() > 0 ? Matrix(gaussian_kernel(X, m.basis, m.hyper.sigma))
                                      : Matrix(X);
        Vector f_pos = (F * m.w_pos).array() + m.b_pos;
        Vector f_neg = (F * m.w_neg).array() + m.b_neg;
        scores = f_neg.cwiseAbs() / m.wnorm_neg - f_pos.cwiseAbs() / m.wnorm_pos;
    }

    Vector labels(n);
    for (Eigen::Index i = 0; i < n; ++i) labels(i) = scores(i) >= 0.0 ? 1.0 : -1.0;
    return {labels, scores};
}

}  // namespace smczoo
