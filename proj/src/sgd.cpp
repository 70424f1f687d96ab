#include "smczoo/sgd.hpp"

#include <stdexcept>

namespace smczoo {

void SgdParams::validate() const {
    if (m < 1) throw std::invalid_argument("SgdParams: m must be >= 1");
    if (max_it < 1) throw std::invalid_argument("SgdParams: max_it must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("SgdParams: epsilon must be > 0");
    if (r < 0.0 || r >= 1.0) throw std::invalid_argument("SgdParams: r must be in [0,1)");
}

SgdResult sgd_momentum(const GradFn& grad, int n_samples, const Vector& init,
                       const SgdParams& params, std::uint64_t seed) {
    params.validate();
    if (n_samples < 1) throw std::invalid_argument("sgd_momentum: need samples");

    RngStream rng(seed);
    SgdResult res;
    res.w = init;
    Vector v = Vector::Zero(init.size());

    std::vector<int> order = iota_indices(n_samples);
    const int batch = std::min(params.m, n_samples);
    int epoch = 0;
    std::size_t cursor = order.size();  // force shuffle on first step

    for (int it = 1; it <= params.max_it; ++it) {
        if (cursor + batch > order.size()) {
            rng.shuffle(order);
            cursor = 0;
            if (it > 1) ++epoch;
        }
        std::span<const int> idx(order.data() + cursor, static_cast<std::size_t>(batch));
        cursor += static_cast<std::size_t>(batch);

        const double eta = 1.0 / (1.0 + params.k * (params.t + epoch));
        Vector g = grad(res.w, idx);
        if (!g.allFinite()) {
            res.diverged = true;
            res.iterations = it;
            return res;
        }
        v = params.r * v - eta * g;
        res.w += v;
        res.iterations = it;

        if (res.w.norm() > 1e12) {
            res.diverged = true;
            return res;
        }
        if (v.norm() < params.epsilon) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

}  // namespace smczoo
