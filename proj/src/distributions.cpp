#include "smczoo/distributions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace smczoo {

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int kMaxIter = 300;
    constexpr double kEps = 3e-15;
    constexpr double kFpMin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::abs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0))
        throw std::invalid_argument("incomplete_beta: a, b must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, double dof) {
    if (!(dof > 0.0)) throw std::invalid_argument("student_t_two_sided_p: dof must be positive");
    if (!std::isfinite(t)) return 0.0;
    return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

double chi_squared_sf_1dof(double x) {
    if (x <= 0.0) return 1.0;
    return std::erfc(std::sqrt(x / 2.0));
}

double f_sf(double x, double dof1, double dof2) {
    if (!(dof1 > 0.0) || !(dof2 > 0.0))
        throw std::invalid_argument("f_sf: dofs must be positive");
    if (x <= 0.0) return 1.0;
    return incomplete_beta(dof2 / 2.0, dof1 / 2.0, dof2 / (dof2 + dof1 * x));
}

double f_critical(double dof1, double dof2, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("f_critical: alpha must be in (0,1)");
    double lo = 0.0, hi = 1.0;
    while (f_sf(hi, dof1, dof2) > alpha) {
        hi *= 2.0;
        if (hi > 1e12) return std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f_sf(mid, dof1, dof2) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace smczoo
