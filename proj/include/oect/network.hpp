#pragma once

// Random construction of an OECT reservoir: per-device parameter arrays, the
// directed resistor network that couples drains to gates, and the effective
// coupling matrices derived from it by Kirchhoff's current law.

#include "device.hpp"
#include "errors.hpp"
#include "rng.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace oect {

/// Mean and standard deviation of one device parameter.
struct Moments {
    double mean = 0.0;
    double std = 0.0;
};

/// Fabrication spread of every OectParams field. Defaults are the nominal
/// device values used for all experiments.
struct ParamDistributions {
    Moments v_bias{-0.5, 0.0};
    Moments v_p{-0.6, 0.0};
    Moments r{500.0, 100.0};
    Moments r_g{2.7e4, 2.7e3};
    Moments c_g{8.98e-7, 8.98e-8};
    Moments k_p{5.82e-4, 5.82e-5};
    Moments w{1.01e-4, 0.0};
    Moments l{2.0e-4, 0.0};

    void validate() const {
        auto check = [](const Moments& m, const char* name, bool positive) {
            detail::require(m.std >= 0.0 && std::isfinite(m.std) && std::isfinite(m.mean),
                            std::string("ParamDistributions: bad moments for ") + name);
            detail::require(m.std == 0.0 || m.mean > 0.0,
                            std::string("ParamDistributions: gamma spread needs a positive mean for ") +
                                name);
            detail::require(!positive || m.mean > 0.0,
                            std::string("ParamDistributions: mean must be positive for ") + name);
        };
        check(v_bias, "v_bias", false);
        check(v_p, "v_p", false);
        check(r, "r", true);
        check(r_g, "r_g", true);
        check(c_g, "c_g", true);
        check(k_p, "k_p", true);
        check(w, "w", true);
        check(l, "l", true);
    }
};

/// Draws one value: gamma with matched mean and variance, or exactly the mean
/// when the spread is zero (no generator output is consumed in that case).
inline double sample_parameter(const Moments& m, Rng& rng) {
    if (m.std == 0.0) return m.mean;
    detail::require(m.mean > 0.0, "sample_parameter: gamma spread needs a positive mean");
    const double shape = (m.mean * m.mean) / (m.std * m.std);
    const double scale = (m.std * m.std) / m.mean;
    return std::gamma_distribution<double>(shape, scale)(rng);
}

inline std::vector<OectParams> sample_device_array(const ParamDistributions& dist, std::size_t n,
                                                   Rng& rng) {
    dist.validate();
    detail::require(n >= 1, "sample_device_array: need at least one device");
    std::vector<OectParams> out(n);
    for (auto& d : out) {
        d.v_bias = sample_parameter(dist.v_bias, rng);
        d.v_p = sample_parameter(dist.v_p, rng);
        d.r = sample_parameter(dist.r, rng);
        d.r_g = sample_parameter(dist.r_g, rng);
        d.c_g = sample_parameter(dist.c_g, rng);
        d.k_p = sample_parameter(dist.k_p, rng);
        d.w = sample_parameter(dist.w, rng);
        d.l = sample_parameter(dist.l, rng);
    }
    return out;
}

/// Directed weighting-resistor network. r_w(n, m) is the resistor from the
/// drain of node m to the gate of node n; +inf marks an absent edge.
struct ResistorNetwork {
    Eigen::MatrixXd r_w;
    Eigen::VectorXd r_g;  ///< per-node gate resistance; +inf when unknown

    Eigen::Index size() const noexcept { return r_w.rows(); }

    bool has_edge(Eigen::Index to, Eigen::Index from) const noexcept {
        return std::isfinite(r_w(to, from));
    }

    std::size_t edge_count() const noexcept {
        std::size_t k = 0;
        for (Eigen::Index i = 0; i < r_w.rows(); ++i)
            for (Eigen::Index j = 0; j < r_w.cols(); ++j) k += has_edge(i, j) ? 1 : 0;
        return k;
    }

    void validate() const {
        detail::require_shape(r_w.rows() == r_w.cols() && r_g.size() == r_w.rows(),
                              "ResistorNetwork: r_w must be square and match r_g");
        for (Eigen::Index i = 0; i < r_w.rows(); ++i) {
            detail::require(!has_edge(i, i), "ResistorNetwork: self-loops are not allowed");
            for (Eigen::Index j = 0; j < r_w.cols(); ++j)
                detail::require(r_w(i, j) > 0.0, "ResistorNetwork: resistances must be positive");
            detail::require(r_g(i) > 0.0, "ResistorNetwork: gate resistance must be positive");
        }
    }
};

/// Directed Erdős–Rényi topology without self-loops; each present edge gets a
/// resistance drawn from Uniform(r_low, r_high). Gate resistances are left at
/// +inf; attach the device values with with_gate_resistances().
inline ResistorNetwork sample_topology(std::size_t n, double p, Rng& rng, double r_low = 100.0,
                                       double r_high = 500.0) {
    detail::require(p >= 0.0 && p <= 1.0, "sample_topology: p must lie in [0, 1]");
    detail::require(r_low > 0.0 && r_low <= r_high, "sample_topology: need 0 < r_low <= r_high");
    const auto N = static_cast<Eigen::Index>(n);
    constexpr double inf = std::numeric_limits<double>::infinity();
    ResistorNetwork net{Eigen::MatrixXd::Constant(N, N, inf), Eigen::VectorXd::Constant(N, inf)};
    std::bernoulli_distribution edge(p);
    std::uniform_real_distribution<double> resistance(r_low, r_high);
    for (Eigen::Index to = 0; to < N; ++to) {
        for (Eigen::Index from = 0; from < N; ++from) {
            if (to == from) continue;
            if (edge(rng)) net.r_w(to, from) = (r_low == r_high) ? r_low : resistance(rng);
        }
    }
    return net;
}

inline ResistorNetwork with_gate_resistances(ResistorNetwork net,
                                             std::span<const OectParams> devices) {
    detail::require_shape(static_cast<Eigen::Index>(devices.size()) == net.size(),
                          "with_gate_resistances: device count differs from node count");
    for (std::size_t i = 0; i < devices.size(); ++i)
        net.r_g(static_cast<Eigen::Index>(i)) = devices[i].r_g;
    return net;
}

/// Effective coupling: V_G = f .* V1 + A V_D (+ input).
struct CouplingMatrix {
    Eigen::MatrixXd a;
    Eigen::VectorXd f;
    Eigen::VectorXd s;  ///< total gate-node conductance [1/ohm]
    bool leak_neglected = true;

    Eigen::Index size() const noexcept { return a.rows(); }
};

/// Builds A, f and S from the resistor network. With the leak neglected the
/// gate conductance is dropped from S, making every row with an in-edge sum
/// to one; a node with no in-edges then has S = 0 and gets a zero row.
inline CouplingMatrix effective_coupling(const ResistorNetwork& net, bool leak_neglected) {
    net.validate();
    const Eigen::Index n = net.size();
    CouplingMatrix c{Eigen::MatrixXd::Zero(n, n), Eigen::VectorXd::Zero(n),
                     Eigen::VectorXd::Zero(n), leak_neglected};
    for (Eigen::Index i = 0; i < n; ++i) {
        double s = leak_neglected ? 0.0 : 1.0 / net.r_g(i);
        for (Eigen::Index j = 0; j < n; ++j) s += 1.0 / net.r_w(i, j);
        c.s(i) = s;
        if (s == 0.0) continue;
        for (Eigen::Index j = 0; j < n; ++j) c.a(i, j) = 1.0 / (net.r_w(i, j) * s);
        if (!leak_neglected) c.f(i) = 1.0 / (net.r_g(i) * s);
    }
    return c;
}

/// Input weights, n x d, entries Uniform(-sigma, sigma) [V per task unit].
struct InputMatrix {
    Eigen::MatrixXd w_in;
};

inline InputMatrix sample_input_matrix(std::size_t n, std::size_t d, double sigma, Rng& rng) {
    detail::require(n >= 1 && d >= 1, "sample_input_matrix: empty shape");
    detail::require(sigma > 0.0, "sample_input_matrix: sigma must be positive");
    std::uniform_real_distribution<double> u(-sigma, sigma);
    InputMatrix m{Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d))};
    for (Eigen::Index i = 0; i < m.w_in.rows(); ++i)
        for (Eigen::Index k = 0; k < m.w_in.cols(); ++k) m.w_in(i, k) = u(rng);
    return m;
}

/// Largest eigenvalue modulus, from a full eigen-decomposition.
inline double spectral_radius(const Eigen::MatrixXd& a) {
    if (a.size() == 0) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(a, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

/// Power-iteration estimate of the spectral radius, suited to nonnegative
/// matrices where the Perron root dominates. Returns the growth ratio of the
/// final iteration.
inline double power_iteration_radius(const Eigen::MatrixXd& a, const Eigen::VectorXd& start,
                                     int iterations = 1000) {
    Eigen::VectorXd x = start.normalized();
    double ratio = 0.0;
    for (int k = 0; k < iterations; ++k) {
        Eigen::VectorXd y = a * x;
        ratio = y.norm();
        if (ratio == 0.0) return 0.0;
        x = y / ratio;
    }
    return ratio;
}

}  // namespace oect
