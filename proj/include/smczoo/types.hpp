#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <numeric>
#include <vector>

namespace smczoo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MatrixRef = Eigen::Ref<const Matrix>;
using VectorRef = Eigen::Ref<const Vector>;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream. Draws are fully specified here (no
/// std::uniform_* involved) so seeds are portable across stdlib
/// implementations.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51ed2701)))
    {}

    std::uint64_t next_u64() {
        // xorshift64* on a splitmix-initialised state
        std::uint64_t x = state_;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        state_ = x;
        return x * 0x2545f4914f6cdd1dULL;
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). Rejection sampling, bias-free.
    std::uint64_t bounded(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do { v = next_u64(); } while (v >= limit);
        return v % n;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(bounded(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    /// n x m matrix with entries Uniform(-1, 1), drawn row-major.
    Matrix uniform_matrix(Eigen::Index n, Eigen::Index m) {
        Matrix out(n, m);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < m; ++j)
                out(i, j) = uniform(-1.0, 1.0);
        return out;
    }

    Vector uniform_vector(Eigen::Index n) {
        Vector out(n);
        for (Eigen::Index i = 0; i < n; ++i) out(i) = uniform(-1.0, 1.0);
        return out;
    }

private:
    std::uint64_t state_;
};

inline std::vector<int> iota_indices(int n) {
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

/// Round half-up to `digits` decimal places.
inline double round_half_up(double x, int digits) {
    double scale = 1.0;
    for (int i = 0; i < digits; ++i) scale *= 10.0;
    return std::floor(x * scale + 0.5) / scale;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace smczoo
