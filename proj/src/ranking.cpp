#include "smczoo/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace smczoo {

RankMatrix rank_models(const MatrixRef& acc, double tie_tol) {
    if (!acc.allFinite()) throw std::invalid_argument("rank_models: missing cell");
    const Eigen::Index P = acc.rows(), N = acc.cols();
    if (P == 0 || N == 0) throw std::invalid_argument("rank_models: empty matrix");

    RankMatrix rm;
    rm.n_datasets = static_cast<int>(P);
    rm.n_models = static_cast<int>(N);
    rm.ranks.resize(P, N);

    for (Eigen::Index p = 0; p < P; ++p) {
        std::vector<int> order = iota_indices(static_cast<int>(N));
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return acc(p, a) > acc(p, b);
        });
        // group consecutive values whose gap is within the tolerance
        Eigen::Index i = 0;
        while (i < N) {
            Eigen::Index j = i;
            while (j + 1 < N &&
                   acc(p, order[static_cast<std::size_t>(j)]) -
                           acc(p, order[static_cast<std::size_t>(j + 1)]) <=
                       tie_tol)
                ++j;
            const double avg_rank = 0.5 * static_cast<double>((i + 1) + (j + 1));
            for (Eigen::Index t = i; t <= j; ++t)
                rm.ranks(p, order[static_cast<std::size_t>(t)]) = avg_rank;
            i = j + 1;
        }
    }
    rm.avg_ranks = rm.ranks.colwise().mean();
    return rm;
}

FriedmanResult friedman(const RankMatrix& rm, double critical_value) {
    if (rm.n_models < 2 || rm.n_datasets < 2)
        throw std::invalid_argument("friedman: need at least 2 models and 2 datasets");
    const double N = rm.n_models;
    const double P = rm.n_datasets;

    FriedmanResult res;
    res.dof1 = rm.n_models - 1;
    res.dof2 = (rm.n_datasets - 1) * (rm.n_models - 1);
    res.critical_value = critical_value;

    const double sum_sq = rm.avg_ranks.squaredNorm();
    res.chi2 = 12.0 * P / (N * (N + 1.0)) * (sum_sq - N * (N + 1.0) * (N + 1.0) / 4.0);

    const double denom = P * (N - 1.0) - res.chi2;
    if (std::abs(denom) < 1e-12) {
        res.degenerate = true;
        res.ff = std::numeric_limits<double>::infinity();
    } else {
        res.ff = res.chi2 * (P - 1.0) / denom;
    }
    res.reject = !res.degenerate && res.ff > critical_value;
    return res;
}

WtlTable win_tie_loss(const MatrixRef& acc, double tie_tol) {
    if (!acc.allFinite()) throw std::invalid_argument("win_tie_loss: missing cell");
    const Eigen::Index P = acc.rows(), N = acc.cols();
    if (P == 0 || N == 0) throw std::invalid_argument("win_tie_loss: empty matrix");

    WtlTable t;
    t.n_models = static_cast<int>(N);
    t.n_datasets = static_cast<int>(P);
    t.threshold = static_cast<double>(P) / 2.0 + 1.96 * std::sqrt(static_cast<double>(P)) / 2.0;
    t.cells.assign(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), WtlEntry{});

    for (Eigen::Index r = 0; r < N; ++r) {
        for (Eigen::Index c = 0; c < N; ++c) {
            WtlEntry e;
            for (Eigen::Index p = 0; p < P; ++p) {
                const double diff = acc(p, r) - acc(p, c);
                if (std::abs(diff) <= tie_tol)
                    ++e.ties;
                else if (diff > 0)
                    ++e.wins;
                else
                    ++e.losses;
            }
            t.cells[static_cast<std::size_t>(r) * static_cast<std::size_t>(N) +
                    static_cast<std::size_t>(c)] = e;
            if (r != c) {
                // odd tie counts drop one tie before the even split
                const int shared = e.ties % 2 == 0 ? e.ties / 2 : (e.ties - 1) / 2;
                if (static_cast<double>(e.wins + shared) >= t.threshold)
                    t.significant_pairs.emplace_back(static_cast<int>(r), static_cast<int>(c));
            }
        }
    }
    return t;
}

}  // namespace smczoo
