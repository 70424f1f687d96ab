#pragma once

#include "smczoo/types.hpp"

namespace smczoo {

/// Regularised least squares: argmin ||A*beta - B||^2 + (1/C)*||beta||^2.
/// Solved in primal form (A'A + I/C) when cols <= rows, dual form
/// A'(AA' + I/C)^-1 B otherwise; the two agree to rounding.
Matrix ridge_solve(const MatrixRef& A, const MatrixRef& B, double C);

/// Moore-Penrose pseudo-inverse via SVD. Singular values below
/// tol * max_sv are treated as zero.
Matrix pinv(const MatrixRef& A, double tol = 1e-12);

}  // namespace smczoo
