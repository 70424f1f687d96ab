#pragma once

#include "smczoo/types.hpp"

#include <functional>
#include <span>

namespace smczoo {

struct SgdParams {
    double t = 0.0;        // initial value of the decay counter
    double k = 0.1;        // learning-rate decay
    double epsilon = 1e-8; // parameter-change stopping tolerance
    double r = 0.6;        // momentum
    int max_it = 5000;     // iteration cap (mini-batch steps)
    int m = 100;           // mini-batch size

    void validate() const;  // throws
};

struct SgdResult {
    Vector w;
    int iterations = 0;
    bool converged = false;
    bool diverged = false;
};

/// grad(w, batch) returns the stochastic gradient at w estimated on the
/// given sample indices.
using GradFn = std::function<Vector(const Vector&, std::span<const int>)>;

/// Classical momentum SGD. Learning rate eta_e = 1/(1 + k*(t + e)) with e
/// the 0-based epoch. Stops when the parameter change drops below epsilon
/// or the iteration cap is hit; aborts with the diverged flag when
/// ||w|| exceeds 1e12.
SgdResult sgd_momentum(const GradFn& grad, int n_samples, const Vector& init,
                       const SgdParams& params, std::uint64_t seed);

}  // namespace smczoo
