#include "smczoo/qp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace smczoo {

void QpProblem::validate(double sym_tol) const {
    const Eigen::Index n = Q.rows();
    if (Q.cols() != n) throw std::invalid_argument("QpProblem: Q must be square");
    if (q.size() != n || lower.size() != n || upper.size() != n)
        throw std::invalid_argument("QpProblem: dimension mismatch");
    if (!Q.allFinite() || !q.allFinite())
        throw std::invalid_argument("QpProblem: non-finite data");
    if (((upper - lower).array() < 0.0).any())
        throw std::invalid_argument("QpProblem: lower > upper");
    const double scale = std::max(1.0, Q.cwiseAbs().maxCoeff());
    if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > sym_tol * scale)
        throw std::invalid_argument("QpProblem: Q not symmetric");
    if (eq_a && eq_a->size() != n)
        throw std::invalid_argument("QpProblem: eq_a dimension mismatch");
}

Vector qp_project(const QpProblem& p, const Vector& x) {
    Vector clamped = x.cwiseMax(p.lower).cwiseMin(p.upper);
    if (!p.eq_a) return clamped;

    const Vector& a = *p.eq_a;
    auto clamp_shift = [&](double nu) {
        return (x - nu * a).cwiseMax(p.lower).cwiseMin(p.upper);
    };
    auto h = [&](double nu) { return a.dot(clamp_shift(nu)) - p.eq_b; };

    // h is non-increasing in nu; bracket then bisect.
    double lo = -1.0, hi = 1.0;
    for (int i = 0; i < 200 && h(lo) < 0.0; ++i) lo *= 2.0;
    for (int i = 0; i < 200 && h(hi) > 0.0; ++i) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-16 * std::max(1.0, std::abs(mid))) break;
    }
    return clamp_shift(0.5 * (lo + hi));
}

namespace {

struct Workspace {
    const QpProblem& p;
    double objective(const Vector& x) const {
        return 0.5 * x.dot(p.Q * x) + p.q.dot(x);
    }
    Vector gradient(const Vector& x) const { return p.Q * x + p.q; }
    double pg_inf_norm(const Vector& x, const Vector& g) const {
        return (qp_project(p, x - g) - x).cwiseAbs().maxCoeff();
    }
};

// Solve the KKT system on the guessed active set; returns the exact
// candidate when bounds and multiplier signs check out.
bool try_active_set(const Workspace& ws, const Vector& x, double tol, Vector& out) {
    const QpProblem& p = ws.p;
    const Eigen::Index n = x.size();
    const double band = std::max(10.0 * tol, 1e-10);

    std::vector<Eigen::Index> free_idx;
    std::vector<bool> is_free(static_cast<std::size_t>(n), false);
    Vector cand = x;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (x(i) <= p.lower(i) + band)
            cand(i) = p.lower(i);
        else if (x(i) >= p.upper(i) - band)
            cand(i) = p.upper(i);
        else {
            free_idx.push_back(i);
            is_free[static_cast<std::size_t>(i)] = true;
        }
    }

    const auto nf = static_cast<Eigen::Index>(free_idx.size());
    const bool has_eq = p.eq_a.has_value();
    double nu = 0.0;

    if (nf > 0) {
        const Eigen::Index dim = nf + (has_eq ? 1 : 0);
        Matrix K = Matrix::Zero(dim, dim);
        Vector rhs = Vector::Zero(dim);
        for (Eigen::Index r = 0; r < nf; ++r) {
            for (Eigen::Index c = 0; c < nf; ++c)
                K(r, c) = p.Q(free_idx[r], free_idx[c]);
            double acc = p.q(free_idx[r]);
            for (Eigen::Index i = 0; i < n; ++i)
                if (!is_free[static_cast<std::size_t>(i)])
                    acc += p.Q(free_idx[r], i) * cand(i);
            rhs(r) = -acc;
            if (has_eq) {
                K(r, nf) = (*p.eq_a)(free_idx[r]);
                K(nf, r) = (*p.eq_a)(free_idx[r]);
            }
        }
        if (has_eq) {
            double bound_part = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                if (!is_free[static_cast<std::size_t>(i)])
                    bound_part += (*p.eq_a)(i)*cand(i);
            rhs(nf) = p.eq_b - bound_part;
        }
        Eigen::FullPivLU<Matrix> lu(K);
        if (!lu.isInvertible()) return false;
        Vector sol = lu.solve(rhs);
        if (!sol.allFinite()) return false;
        for (Eigen::Index r = 0; r < nf; ++r) cand(free_idx[r]) = sol(r);
        if (has_eq) nu = sol(nf);
    } else if (has_eq) {
        if (std::abs(p.eq_a->dot(cand) - p.eq_b) > std::max(tol, 1e-10)) return false;
        // nu from least-squares fit of the bound gradients
        Vector g = ws.gradient(cand);
        double num = 0.0, den = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            num += -g(i) * (*p.eq_a)(i);
            den += (*p.eq_a)(i) * (*p.eq_a)(i);
        }
        if (den > 0.0) nu = num / den;
    }

    // feasibility of the free block
    for (Eigen::Index i = 0; i < n; ++i)
        if (cand(i) < p.lower(i) - band || cand(i) > p.upper(i) + band) return false;
    cand = cand.cwiseMax(p.lower).cwiseMin(p.upper);

    // multiplier signs for bound-active entries
    Vector g = ws.gradient(cand);
    const double mtol = std::max(100.0 * tol, 1e-8) * std::max(1.0, g.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = g(i) + (has_eq ? nu * (*p.eq_a)(i) : 0.0);
        const bool at_lower = cand(i) <= p.lower(i) + band;
        const bool at_upper = cand(i) >= p.upper(i) - band;
        if (at_lower && at_upper) continue;  // pinned variable
        if (at_lower && lam < -mtol) return false;
        if (at_upper && lam > mtol) return false;
    }

    out = cand;
    return true;
}

}  // namespace

QpResult box_qp_solve(const QpProblem& p, double tol, int max_iter) {
    p.validate();
    const Eigen::Index n = p.Q.rows();
    Workspace ws{p};

    QpResult res;
    if (n == 0) {
        res.x = Vector();
        res.converged = true;
        return res;
    }

    Vector x = qp_project(p, 0.5 * (p.lower + p.upper).unaryExpr([](double v) {
        return std::isfinite(v) ? v : 0.0;
    }));
    Vector g = ws.gradient(x);
    double f = ws.objective(x);

    const double qnorm = std::max(p.Q.cwiseAbs().rowwise().sum().maxCoeff(), 1e-12);
    double sigma = 1.0 / qnorm;
    constexpr double kSigmaMin = 1e-12, kSigmaMax = 1e12;
    constexpr int kHistory = 10;
    std::deque<double> fhist{f};

    Vector best_x = x;
    double best_pg = ws.pg_inf_norm(x, g);

    for (int it = 1; it <= max_iter; ++it) {
        const double pg = ws.pg_inf_norm(x, g);
        if (pg < best_pg) {
            best_pg = pg;
            best_x = x;
        }
        if (pg <= tol) {
            res.x = x;
            res.converged = true;
            res.iterations = it - 1;
            res.pg_norm = pg;
            res.objective = ws.objective(x);
            return res;
        }

        if (it % 10 == 0 || pg <= 100.0 * tol) {
            Vector exact;
            if (try_active_set(ws, x, tol, exact)) {
                Vector ge = ws.gradient(exact);
                const double pge = ws.pg_inf_norm(exact, ge);
                if (pge <= tol) {
                    res.x = exact;
                    res.converged = true;
                    res.iterations = it;
                    res.pg_norm = pge;
                    res.objective = ws.objective(exact);
                    return res;
                }
                const double fe = ws.objective(exact);
                if (fe < f - 1e-14 * std::abs(f)) {
                    x = exact;
                    g = ge;
                    f = fe;
                    fhist.push_back(f);
                    if (fhist.size() > kHistory) fhist.pop_front();
                    continue;
                }
            }
        }

        Vector d = qp_project(p, x - sigma * g) - x;
        const double gd = g.dot(d);
        if (d.cwiseAbs().maxCoeff() < 1e-18) {
            // projection step stalled; treat as converged-to-best
            break;
        }

        const double fref = *std::max_element(fhist.begin(), fhist.end());
        double lambda = 1.0;
        Vector xn;
        double fn = 0.0;
        for (int ls = 0; ls < 60; ++ls) {
            xn = x + lambda * d;
            fn = ws.objective(xn);
            if (fn <= fref + 1e-4 * lambda * gd) break;
            lambda *= 0.5;
        }

        Vector gn = ws.gradient(xn);
        Vector s = xn - x;
        Vector yv = gn - g;
        const double sy = s.dot(yv);
        sigma = sy > 1e-30 ? std::clamp(s.dot(s) / sy, kSigmaMin, kSigmaMax) : kSigmaMax;

        x = std::move(xn);
        g = std::move(gn);
        f = fn;
        fhist.push_back(f);
        if (fhist.size() > kHistory) fhist.pop_front();
        res.iterations = it;
    }

    res.x = best_x;
    res.converged = best_pg <= tol;
    res.pg_norm = best_pg;
    res.objective = ws.objective(best_x);
    return res;
}

}  // namespace smczoo
