#pragma once

// Conventional discrete-time echo state network, r <- tanh(A r + W_in u),
// used as the reference against which the OECT reservoir is compared.

#include "config.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "pipeline.hpp"
#include "reservoir.hpp"
#include "rng.hpp"
#include "tasks.hpp"

#include <Eigen/Dense>

#include <random>

namespace oect {

struct TanhReservoir {
    Eigen::MatrixXd a;
    Eigen::MatrixXd w_in;
    Eigen::VectorXd r;
    double dt = 1.0;
    std::size_t steps = 0;

    void drive(const Eigen::VectorXd& u);
    const Eigen::VectorXd& state() const noexcept { return r; }
    Eigen::Index size() const noexcept { return r.size(); }
    Eigen::Index input_dim() const noexcept { return w_in.cols(); }
    double time() const noexcept { return static_cast<double>(steps) * dt; }
};

inline const Eigen::VectorXd& tanh_step(TanhReservoir& res, const Eigen::VectorXd& u) {
    detail::require_shape(u.size() == res.w_in.cols() && res.a.rows() == res.r.size() &&
                              res.w_in.rows() == res.r.size(),
                          "tanh_step: dimension mismatch");
    res.r = (res.a * res.r + res.w_in * u).array().tanh().matrix();
    ++res.steps;
    return res.r;
}

inline void TanhReservoir::drive(const Eigen::VectorXd& u) { tanh_step(*this, u); }

static_assert(Reservoir<TanhReservoir>);

/// Erdős–Rényi coupling without self-loops, nonzero weights Uniform(-scale,
/// scale), rescaled to the requested spectral radius. Input weights are
/// Uniform(-input_scale, input_scale). The state starts at zero.
inline TanhReservoir make_tanh_reservoir(std::size_t n, std::size_t d, double p,
                                         double spectral_radius_target, double weight_scale,
                                         double input_scale, double dt, Rng& rng) {
    detail::require(n >= 1 && d >= 1, "make_tanh_reservoir: empty shape");
    detail::require(p >= 0.0 && p <= 1.0, "make_tanh_reservoir: p must lie in [0, 1]");
    const auto N = static_cast<Eigen::Index>(n);
    TanhReservoir res;
    res.a = Eigen::MatrixXd::Zero(N, N);
    std::bernoulli_distribution edge(p);
    std::uniform_real_distribution<double> weight(-weight_scale, weight_scale);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j)
            if (i != j && edge(rng)) res.a(i, j) = weight(rng);
    const double rho = spectral_radius(res.a);
    if (rho > 0.0) res.a *= spectral_radius_target / rho;

    std::uniform_real_distribution<double> input(-input_scale, input_scale);
    res.w_in.resize(N, static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index k = 0; k < res.w_in.cols(); ++k) res.w_in(i, k) = input(rng);
    res.r = Eigen::VectorXd::Zero(N);
    res.dt = dt;
    return res;
}

inline TanhReservoir make_tanh_reservoir(const ExperimentConfig& cfg, Rng& rng) {
    return make_tanh_reservoir(cfg.n, 3, cfg.p, cfg.tanh_spectral_radius, cfg.tanh_weight_scale,
                               cfg.tanh_input_scale, cfg.dt, rng);
}

/// One baseline trial: build the reservoir, draw an initial condition, train
/// and forecast. Consumes `rng` in that order.
inline ForecastResult run_baseline_pipeline(const ExperimentConfig& cfg, Rng& rng) {
    cfg.validate();
    TanhReservoir res = make_tanh_reservoir(cfg, rng);
    const Eigen::Vector3d u0 = sample_lorenz_ic(rng, cfg.lorenz, cfg.dt, cfg.ic_perturbation_std);
    return train_and_forecast(res, cfg, u0).fh;
}

}  // namespace oect
