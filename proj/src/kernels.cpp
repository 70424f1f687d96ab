#include "smczoo/kernels.hpp"

#include <stdexcept>

namespace smczoo {

Matrix squared_distances(const MatrixRef& X, const MatrixRef& Y) {
    if (X.cols() != Y.cols())
        throw std::invalid_argument("squared_distances: dimension mismatch");
    Vector xn = X.rowwise().squaredNorm();
    Vector yn = Y.rowwise().squaredNorm();
    Matrix d = (-2.0 * X * Y.transpose()).rowwise() + yn.transpose();
    d.colwise() += xn;
    return d.cwiseMax(0.0);
}

Matrix gaussian_kernel(const MatrixRef& X, const MatrixRef& Y, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_kernel: sigma must be positive");
    Matrix d = squared_distances(X, Y);
    return (-d / (sigma * sigma)).array().exp();
}

}  // namespace smczoo
