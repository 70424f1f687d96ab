#include "smczoo/fuzzy.hpp"

#include "smczoo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smczoo {

std::vector<IfScore> if_score(const MatrixRef& X, const VectorRef& labels, double mu,
                              int k_neighbors, double delta) {
    const Eigen::Index n = X.rows();
    if (labels.size() != n) throw std::invalid_argument("if_score: label length mismatch");
    bool has_pos = false, has_neg = false;
    for (Eigen::Index i = 0; i < n; ++i) (labels(i) > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg) throw std::invalid_argument("if_score: both classes required");

    Matrix K = gaussian_kernel(X, X, mu);

    // ||phi(x_i) - c_class||^2 = K_ii - 2/n_c sum_j K_ij + 1/n_c^2 sum_jl K_jl
    Vector dist(n);
    double max_dist_pos = 0.0, max_dist_neg = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        const double cls = pass == 0 ? 1.0 : -1.0;
        std::vector<Eigen::Index> members;
        for (Eigen::Index i = 0; i < n; ++i)
            if ((labels(i) > 0) == (cls > 0)) members.push_back(i);
        const double nc = static_cast<double>(members.size());
        double within = 0.0;
        for (auto j : members)
            for (auto l : members) within += K(j, l);
        within /= nc * nc;
        double max_d = 0.0;
        for (auto i : members) {
            double cross = 0.0;
            for (auto j : members) cross += K(i, j);
            const double d2 = std::max(0.0, K(i, i) - 2.0 * cross / nc + within);
            dist(i) = std::sqrt(d2);
            max_d = std::max(max_d, dist(i));
        }
        (cls > 0 ? max_dist_pos : max_dist_neg) = max_d;
    }

    const int k = std::min<int>(k_neighbors, static_cast<int>(n) - 1);
    std::vector<IfScore> out(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        const double radius = labels(i) > 0 ? max_dist_pos : max_dist_neg;
        double m = 1.0 - dist(i) / (radius + delta);
        m = std::clamp(m, 0.0, 1.0);

        // kernel-space kNN: distance is monotone decreasing in K(i,j)
        std::vector<Eigen::Index> order;
        order.reserve(static_cast<std::size_t>(n) - 1);
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) order.push_back(j);
        std::stable_sort(order.begin(), order.end(),
                         [&](Eigen::Index a, Eigen::Index b) { return K(i, a) > K(i, b); });
        int hetero = 0;
        for (int t = 0; t < k; ++t)
            if ((labels(order[static_cast<std::size_t>(t)]) > 0) != (labels(i) > 0)) ++hetero;
        const double rho = k > 0 ? static_cast<double>(hetero) / k : 0.0;
        const double nu = std::clamp(rho * (1.0 - m), 0.0, 1.0 - m);

        IfScore s;
        s.membership = m;
        s.nonmembership = nu;
        if (nu == 0.0)
            s.score = m;
        else if (m <= nu)
            s.score = 0.0;
        else
            s.score = (1.0 - nu) / (2.0 - m - nu);
        out[static_cast<std::size_t>(i)] = s;
    }
    return out;
}

Vector if_score_values(const MatrixRef& X, const VectorRef& labels, double mu) {
    auto scores = if_score(X, labels, mu);
    Vector v(static_cast<Eigen::Index>(scores.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = scores[static_cast<std::size_t>(i)].score;
    return v;
}

}  // namespace smczoo
