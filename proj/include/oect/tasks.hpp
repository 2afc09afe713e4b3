#pragma once

// Lorenz-63 ground truth and the forecast-horizon score.

#include "errors.hpp"
#include "io.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace oect {

struct LorenzParams {
    double sigma = 10.0;
    double rho = 28.0;
    double beta = 8.0 / 3.0;
};

/// Uniformly sampled trajectory; row i is the state at t0 + i * dt.
struct TaskSeries {
    double dt = 0.01;
    double t0 = 0.0;
    Eigen::MatrixXd rows;

    Eigen::Index size() const noexcept { return rows.rows(); }
    double time(Eigen::Index i) const noexcept { return t0 + static_cast<double>(i) * dt; }
};

struct ForecastResult {
    double horizon = 0.0;   ///< time of first exceedance, or the window length
    bool exceeded = false;  ///< false when the tolerance was never exceeded
};

inline Eigen::Vector3d lorenz_rate(const Eigen::Vector3d& u, const LorenzParams& p) noexcept {
    return {p.sigma * (u.y() - u.x()), u.x() * (p.rho - u.z()) - u.y(), u.x() * u.y() - p.beta * u.z()};
}

inline Eigen::Vector3d lorenz_rk4_step(const Eigen::Vector3d& u, const LorenzParams& p,
                                       double dt) noexcept {
    const Eigen::Vector3d k1 = lorenz_rate(u, p);
    const Eigen::Vector3d k2 = lorenz_rate(u + 0.5 * dt * k1, p);
    const Eigen::Vector3d k3 = lorenz_rate(u + 0.5 * dt * k2, p);
    const Eigen::Vector3d k4 = lorenz_rate(u + dt * k3, p);
    return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// steps + 1 rows starting at u0 (t0 = 0).
inline TaskSeries integrate_rk4(const LorenzParams& p, const Eigen::Vector3d& u0, double dt,
                                std::size_t steps) {
    detail::require(dt > 0.0, "integrate_rk4: dt must be positive");
    TaskSeries s{dt, 0.0, Eigen::MatrixXd(static_cast<Eigen::Index>(steps) + 1, 3)};
    Eigen::Vector3d u = u0;
    s.rows.row(0) = u.transpose();
    for (std::size_t j = 1; j <= steps; ++j) {
        u = lorenz_rk4_step(u, p, dt);
        if (!u.allFinite()) throw IntegrationDivergence("integrate_rk4: non-finite Lorenz state", j);
        s.rows.row(static_cast<Eigen::Index>(j)) = u.transpose();
    }
    return s;
}

/// Reference point from which initial conditions are perturbed.
inline const Eigen::Vector3d kLorenzBasePoint{-7.4, -11.1, 20.0};

/// Integrates `start` for `relax_time` so the result lies on the attractor.
inline Eigen::Vector3d relax_to_attractor(const Eigen::Vector3d& start, const LorenzParams& p,
                                          double dt = 0.01, double relax_time = 10.0) {
    const auto steps = static_cast<std::size_t>(std::llround(relax_time / dt));
    Eigen::Vector3d u = start;
    for (std::size_t j = 1; j <= steps; ++j) {
        u = lorenz_rk4_step(u, p, dt);
        if (!u.allFinite()) throw IntegrationDivergence("relax_to_attractor: non-finite state", j);
    }
    return u;
}

/// Base point plus i.i.d. Normal(0, perturbation_std) noise, relaxed for 10
/// time units.
inline Eigen::Vector3d sample_lorenz_ic(Rng& rng, const LorenzParams& p, double dt = 0.01,
                                        double perturbation_std = 0.1) {
    std::normal_distribution<double> noise(0.0, perturbation_std);
    Eigen::Vector3d start = kLorenzBasePoint;
    for (int k = 0; k < 3; ++k) start(k) += noise(rng);
    return relax_to_attractor(start, p, dt);
}

/// Earliest t > 0 at which |truth(t) - pred(t)|_2 > delta.
inline ForecastResult forecast_horizon(const TaskSeries& truth, const TaskSeries& pred,
                                       double delta) {
    detail::require(delta > 0.0, "forecast_horizon: delta must be positive");
    detail::require_shape(truth.dt == pred.dt && truth.t0 == pred.t0,
                          "forecast_horizon: series use different time grids");
    detail::require_shape(truth.rows.rows() == pred.rows.rows() && truth.rows.cols() == pred.rows.cols(),
                          "forecast_horizon: series have different shapes");
    ForecastResult r;
    for (Eigen::Index i = 0; i < truth.size(); ++i) {
        const double t = truth.time(i);
        if (t <= 0.0) continue;
        r.horizon = t;
        if ((truth.rows.row(i) - pred.rows.row(i)).norm() > delta) {
            r.exceeded = true;
            return r;
        }
    }
    return r;
}

/// CSV with header "t,x,y,z".
inline void write_task_csv(const TaskSeries& s, const std::string& path) {
    detail::require_shape(s.rows.cols() == 3, "write_task_csv: series must have three columns");
    auto out = io::open_for_write(path);
    out << "t,x,y,z\n";
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        out << io::format_double(s.time(i));
        for (int k = 0; k < 3; ++k) out << ',' << io::format_double(s.rows(i, k));
        out << '\n';
    }
    io::finish_write(out, path);
}

inline TaskSeries read_task_csv(const std::string& path) {
    auto in = io::open_for_read(path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,y,z", 0) != 0)
        throw IoError("'" + path + "': expected header t,x,y,z");
    std::vector<double> t;
    std::vector<Eigen::Vector3d> rows;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto f = io::split(line, ',');
        if (f.size() != 4) throw IoError("'" + path + "': malformed row '" + line + "'");
        t.push_back(io::parse_double(f[0]));
        rows.emplace_back(io::parse_double(f[1]), io::parse_double(f[2]), io::parse_double(f[3]));
    }
    TaskSeries s;
    s.rows.resize(static_cast<Eigen::Index>(rows.size()), 3);
    for (std::size_t i = 0; i < rows.size(); ++i) s.rows.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
    if (!t.empty()) s.t0 = t.front();
    if (t.size() >= 2) s.dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    return s;
}

}  // namespace oect
