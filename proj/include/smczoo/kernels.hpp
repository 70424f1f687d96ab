#pragma once

#include "smczoo/types.hpp"

namespace smczoo {

/// Gaussian kernel K[i,j] = exp(-||x_i - y_j||^2 / sigma^2).
/// Project-wide convention: no factor 2 in the denominator.
Matrix gaussian_kernel(const MatrixRef& X, const MatrixRef& Y, double sigma);

/// Pairwise squared Euclidean distances, clamped at zero.
Matrix squared_distances(const MatrixRef& X, const MatrixRef& Y);

}  // namespace smczoo
