#pragma once

#include "smczoo/types.hpp"

#include <vector>

namespace smczoo {

struct IfScore {
    double membership = 0.0;
    double nonmembership = 0.0;
    double score = 0.0;
};

/// Per-sample intuitionistic fuzzy scores in the Gaussian-kernel-induced
/// space of width mu. Membership is centroid proximity within the own
/// class; nonmembership is the heterogeneous fraction of the k nearest
/// neighbours scaled by (1 - membership). Score:
///   nonmembership == 0          -> membership
///   membership <= nonmembership -> 0
///   otherwise                   -> (1-nonmembership)/(2-membership-nonmembership)
std::vector<IfScore> if_score(const MatrixRef& X, const VectorRef& labels, double mu,
                              int k_neighbors = 5, double delta = 1e-8);

/// Convenience: just the score column.
Vector if_score_values(const MatrixRef& X, const VectorRef& labels, double mu);

}  // namespace smczoo
