#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#include "oect/device.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

/// Channel current, written out again from the circuit law.
inline double channel_current(const oect::OectParams& p, double v1, double v_d) {
    const double k = p.k_p * p.w / p.l;
    if (v1 - v_d > p.v_p) return -k / 2.0 * (v1 - p.v_p) * (v1 - p.v_p);
    if (v1 > p.v_p && v_d <= 0.0) return 0.0;
    return -k * (v1 - p.v_p - v_d / 2.0) * v_d;
}

/// Residual of V_D = V_bias - I_D R with I_D = I_ch - I_G / 2 and
/// I_G = (V_G - V1) / R_G.
inline double circuit_residual(const oect::OectParams& p, double v_g, double v1, double v_d) {
    const double i_g = (v_g - v1) / p.r_g;
    const double i_d = oracle::channel_current(p, v1, v_d) - i_g / 2.0;
    return v_d - (p.v_bias - i_d * p.r);
}

enum class Branch { Saturation, Cutoff, Linear };

inline Branch classify(const oect::OectParams& p, double v1, double v_d) {
    if (v1 - v_d > p.v_p) return Branch::Saturation;
    if (v1 > p.v_p && v_d <= 0.0) return Branch::Cutoff;
    return Branch::Linear;
}

/// Distance of (v1, v_d) from the nearest regime boundary.
inline double guard_margin(const oect::OectParams& p, double v1, double v_d) {
    return std::min({std::abs(v1 - v_d - p.v_p), std::abs(v1 - p.v_p), std::abs(v_d)});
}

struct RootResult {
    double v_d;
    Branch branch;
    double margin;
};

/// Scans [lo, hi] for sign changes of the circuit residual, refines each by
/// bisection, discards jumps across discontinuities, and returns the root of
/// the highest-priority regime (saturation, then cutoff, then linear).
inline std::optional<RootResult> solve_drain_by_bisection(const oect::OectParams& p, double v_g,
                                                          double v1, double lo, double hi,
                                                          int grid = 20000) {
    std::vector<RootResult> roots;
    const double h = (hi - lo) / grid;
    double x0 = lo;
    double f0 = circuit_residual(p, v_g, v1, x0);
    for (int i = 1; i <= grid; ++i) {
        const double x1 = lo + i * h;
        const double f1 = circuit_residual(p, v_g, v1, x1);
        if ((f0 <= 0.0) != (f1 <= 0.0)) {
            double a = x0, b = x1, fa = f0;
            for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
                const double m = 0.5 * (a + b);
                const double fm = circuit_residual(p, v_g, v1, m);
                if ((fm <= 0.0) == (fa <= 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            const double r = 0.5 * (a + b);
            if (std::abs(circuit_residual(p, v_g, v1, r)) < 1e-9)
                roots.push_back({r, classify(p, v1, r), guard_margin(p, v1, r)});
        }
        x0 = x1;
        f0 = f1;
    }
    for (Branch want : {Branch::Saturation, Branch::Cutoff, Branch::Linear})
        for (const auto& r : roots)
            if (r.branch == want) return r;
    return std::nullopt;
}

/// Ridge solution through the normal equations, W = Y^T S (S^T S + alpha I)^-1,
/// solved by Gauss-Jordan elimination with partial pivoting.
inline Eigen::MatrixXd ridge_normal_equations(const Eigen::MatrixXd& states,
                                              const Eigen::MatrixXd& targets, double alpha) {
    const Eigen::Index n = states.cols();
    const Eigen::Index d = targets.cols();
    Eigen::MatrixXd g(n, n);
    Eigen::MatrixXd rhs(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            double s = 0.0;
            for (Eigen::Index t = 0; t < states.rows(); ++t) s += states(t, i) * states(t, j);
            g(i, j) = s + (i == j ? alpha : 0.0);
        }
        for (Eigen::Index k = 0; k < d; ++k) {
            double s = 0.0;
            for (Eigen::Index t = 0; t < states.rows(); ++t) s += states(t, i) * targets(t, k);
            rhs(i, k) = s;
        }
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        Eigen::Index piv = c;
        for (Eigen::Index r = c + 1; r < n; ++r)
            if (std::abs(g(r, c)) > std::abs(g(piv, c))) piv = r;
        g.row(c).swap(g.row(piv));
        rhs.row(c).swap(rhs.row(piv));
        const double diag = g(c, c);
        g.row(c) /= diag;
        rhs.row(c) /= diag;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = g(r, c);
            g.row(r) -= f * g.row(c);
            rhs.row(r) -= f * rhs.row(c);
        }
    }
    return rhs.transpose();
}

/// Ridge objective sum |W s_j - y_j|^2 + alpha |W|_F^2.
inline double ridge_objective(const Eigen::MatrixXd& w, const Eigen::MatrixXd& states,
                              const Eigen::MatrixXd& targets, double alpha) {
    return (states * w.transpose() - targets).squaredNorm() + alpha * w.squaredNorm();
}

/// First index i with |a_i - b_i| > delta, or -1.
inline Eigen::Index first_exceedance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, double delta) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (Eigen::Index k = 0; k < a.cols(); ++k) s += (a(i, k) - b(i, k)) * (a(i, k) - b(i, k));
        if (std::sqrt(s) > delta) return i;
    }
    return -1;
}

/// Random device with parameters spread well beyond the nominal values.
template <class Rng>
oect::OectParams random_device(Rng& rng) {
    auto u = [&](double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); };
    oect::OectParams p;
    do {
        p.v_bias = u(-1.0, 0.5);
        p.v_p = u(-1.0, 0.5);
        p.r = u(100.0, 1000.0);
        p.r_g = u(1e3, 1e5);
        p.c_g = u(1e-7, 2e-6);
        p.k_p = u(1e-4, 1e-3);
        p.w = u(5e-5, 2e-4);
        p.l = u(1e-4, 4e-4);
    } while (p.k_p * p.w * p.r / p.l < 0.05);
    return p;
}

}  // namespace oracle
