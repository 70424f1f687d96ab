#pragma once

#include "smczoo/types.hpp"

#include <optional>

namespace smczoo {

/// minimize 0.5*x'Qx + q'x  subject to  lower <= x <= upper
/// and optionally eq_a'x = eq_b.
struct QpProblem {
    Matrix Q;
    Vector q;
    Vector lower;
    Vector upper;
    std::optional<Vector> eq_a;
    double eq_b = 0.0;

    void validate(double sym_tol = 1e-10) const;  // throws on violation
};

struct QpResult {
    Vector x;
    bool converged = false;
    int iterations = 0;
    double pg_norm = 0.0;   // inf-norm of projected gradient at x
    double objective = 0.0;
};

/// Projection of x onto the feasible set of p (box, optionally
/// intersected with the equality hyperplane).
Vector qp_project(const QpProblem& p, const Vector& x);

/// Spectral projected gradient with periodic exact active-set refinement.
/// Deterministic for fixed inputs. Converged means the inf-norm of the
/// projected gradient is below tol; otherwise the best iterate is
/// returned with converged=false.
QpResult box_qp_solve(const QpProblem& p, double tol = 1e-8, int max_iter = 20000);

}  // namespace smczoo
