#pragma once

#include "smczoo/types.hpp"

#include <utility>
#include <vector>

namespace smczoo {

/// Comparisons between reported accuracies treat values within this many
/// percentage points as equal; it absorbs inconsistent last-digit rounding
/// in published tables while staying far below any genuine gap.
constexpr double kDefaultTieTolerance = 0.015;

struct RankMatrix {
    Matrix ranks;      // n_datasets x n_models
    Vector avg_ranks;  // length n_models
    int n_models = 0;
    int n_datasets = 0;
};

struct FriedmanResult {
    double chi2 = 0.0;
    double ff = 0.0;
    int dof1 = 0;
    int dof2 = 0;
    double critical_value = 0.0;
    bool reject = false;
    bool degenerate = false;  // F_F pole
};

struct WtlEntry {
    int wins = 0, ties = 0, losses = 0;
};

struct WtlTable {
    int n_models = 0;
    int n_datasets = 0;
    double threshold = 0.0;
    std::vector<WtlEntry> cells;  // row-major n_models x n_models
    std::vector<std::pair<int, int>> significant_pairs;

    const WtlEntry& at(int row, int col) const {
        return cells[static_cast<std::size_t>(row) * static_cast<std::size_t>(n_models) +
                     static_cast<std::size_t>(col)];
    }
};

/// Per dataset (row), rank 1 = highest accuracy; tied values share the
/// average of their rank positions.
RankMatrix rank_models(const MatrixRef& acc, double tie_tol = kDefaultTieTolerance);

FriedmanResult friedman(const RankMatrix& rm, double critical_value);

/// Pairwise win/tie/loss counts; threshold = P/2 + 1.96*sqrt(P)/2.
/// Significance redistributes ties (dropping one when odd) onto the win
/// count; raw counts are preserved.
WtlTable win_tie_loss(const MatrixRef& acc, double tie_tol = kDefaultTieTolerance);

}  // namespace smczoo
