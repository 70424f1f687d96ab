#pragma once

#include "smczoo/types.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace smczoo {

/// Batched raw decision scores for a block of feature rows.
using ScoreFn = std::function<Vector(const Matrix&)>;

struct ShapleyReport {
    Matrix attributions;      // n_explained x n_features
    Vector mean_attribution;  // column means
    double base_value = 0.0;  // model score at the background mean
    int n_permutations = 0;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;
};

struct TopFeatures {
    std::vector<std::pair<std::string, double>> items;  // name, mean |attribution|
};

/// Permutation-sampling Shapley estimator against a single background
/// reference (the column means of `background`). Deterministic per seed;
/// permutation streams are indexed so parallel accumulation would give
/// identical results.
ShapleyReport shapley_sample(const ScoreFn& model, const MatrixRef& background,
                             const MatrixRef& explain_set, int n_perms, std::uint64_t seed,
                             std::vector<std::string> feature_names = {});

/// Exact Shapley values by full coalition enumeration; n_features <= 12.
Vector shapley_exact(const ScoreFn& model, const MatrixRef& background,
                     const VectorRef& instance);

/// Rank by mean absolute attribution, ties broken by feature index.
TopFeatures top_k_features(const ShapleyReport& report, int k = 5);

}  // namespace smczoo
