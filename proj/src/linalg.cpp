#include "smczoo/linalg.hpp"

#include <Eigen/SVD>

#include <stdexcept>

namespace smczoo {

Matrix ridge_solve(const MatrixRef& A, const MatrixRef& B, double C) {
    if (!(C > 0.0)) throw std::invalid_argument("ridge_solve: C must be positive");
    if (!A.allFinite() || !B.allFinite())
        throw std::invalid_argument("ridge_solve: non-finite input");
    if (A.rows() != B.rows())
        throw std::invalid_argument("ridge_solve: row mismatch");

    const double reg = 1.0 / C;
    if (A.cols() <= A.rows()) {
        Matrix G = A.transpose() * A;
        G.diagonal().array() += reg;
        return G.ldlt().solve(A.transpose() * B);
    }
    Matrix G = A * A.transpose();
    G.diagonal().array() += reg;
    return A.transpose() * G.ldlt().solve(B);
}

Matrix pinv(const MatrixRef& A, double tol) {
    if (!A.allFinite()) throw std::invalid_argument("pinv: non-finite input");
    if (A.rows() == 0 || A.cols() == 0) return Matrix::Zero(A.cols(), A.rows());

    Eigen::BDCSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const double cutoff = tol * (sv.size() > 0 ? sv(0) : 0.0);
    Vector inv_sv = Vector::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff && sv(i) > 0.0) inv_sv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace smczoo
