#pragma once

// Time integration of a coupled OECT network.
//
// Each step advances the channel voltages V1 by one classical RK4 step of
//   dV1/dt = (V_G - V1) / (R_G C_G),   V_G = f .* V1 + A V_D + external,
// with the drain voltages V_D taken from the previous step and the external
// drive held fixed over the step, then recomputes V_G and V_D at the new V1.

#include "device.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "network.hpp"
#include "readout.hpp"
#include "reservoir.hpp"

#include <Eigen/Dense>

#include <span>
#include <utility>
#include <string>
#include <vector>

namespace oect {

struct ReservoirState {
    Eigen::VectorXd v1;   ///< channel voltages [V]
    Eigen::VectorXd v_d;  ///< most recent drain voltages [V]
    double t = 0.0;       ///< [s]

    Eigen::Index size() const noexcept { return v1.size(); }
};

/// Per-device constants in the layout the integrator wants.
class DeviceArray {
public:
    DeviceArray() = default;

    explicit DeviceArray(std::span<const OectParams> devices)
        : params_(devices.begin(), devices.end()),
          inv_tau_(static_cast<Eigen::Index>(devices.size())) {
        coeffs_.reserve(devices.size());
        for (std::size_t i = 0; i < devices.size(); ++i) {
            devices[i].validate();
            coeffs_.push_back(derived_coefficients(devices[i]));
            inv_tau_(static_cast<Eigen::Index>(i)) = 1.0 / devices[i].tau();
        }
    }

    Eigen::Index size() const noexcept { return inv_tau_.size(); }
    const std::vector<OectParams>& params() const noexcept { return params_; }
    const Eigen::VectorXd& inv_tau() const noexcept { return inv_tau_; }

    DrainSolution drain(Eigen::Index i, double v_g, double v1) const noexcept {
        const auto k = static_cast<std::size_t>(i);
        return drain_voltage(params_[k], coeffs_[k], v_g, v1);
    }

private:
    std::vector<OectParams> params_;
    std::vector<CoeffPair> coeffs_;
    Eigen::VectorXd inv_tau_;
};

/// Cold start: V1 = 0 everywhere and V_D evaluated once at V_G = 0.
inline ReservoirState initial_state(const DeviceArray& dev) {
    const Eigen::Index n = dev.size();
    ReservoirState s{Eigen::VectorXd::Zero(n), Eigen::VectorXd(n), 0.0};
    for (Eigen::Index i = 0; i < n; ++i) s.v_d(i) = dev.drain(i, 0.0, 0.0).v_d;
    return s;
}

inline ReservoirState initial_state(std::span<const OectParams> devices) {
    return initial_state(DeviceArray(devices));
}

/// V_G = f .* V1 + A V_D + external, using the drain voltages stored in `state`.
inline Eigen::VectorXd gate_voltages(const CouplingMatrix& coupling, const ReservoirState& state,
                                     const Eigen::VectorXd& external) {
    const Eigen::Index n = coupling.size();
    detail::require_shape(state.v1.size() == n && state.v_d.size() == n && external.size() == n &&
                              coupling.f.size() == n,
                          "gate_voltages: dimension mismatch");
    return coupling.f.cwiseProduct(state.v1) + coupling.a * state.v_d + external;
}

namespace detail {

inline bool all_finite(const Eigen::VectorXd& v) noexcept { return v.allFinite(); }

}  // namespace detail

inline ReservoirState reservoir_step(const DeviceArray& dev, const CouplingMatrix& coupling,
                                     const ReservoirState& state, const Eigen::VectorXd& external,
                                     double dt, std::size_t step_index = 0) {
    detail::require(dt > 0.0, "reservoir_step: dt must be positive");
    const Eigen::Index n = dev.size();
    detail::require_shape(coupling.size() == n, "reservoir_step: coupling size differs from device count");

    // Everything but the f .* V1 term is frozen over the step.
    const Eigen::VectorXd drive = gate_voltages(coupling, state, external) -
                                  coupling.f.cwiseProduct(state.v1);
    const Eigen::VectorXd& inv_tau = dev.inv_tau();
    const Eigen::VectorXd leak = coupling.f.array() - 1.0;
    auto rate = [&](const Eigen::VectorXd& v1) -> Eigen::VectorXd {
        return (leak.cwiseProduct(v1) + drive).cwiseProduct(inv_tau);
    };

    const Eigen::VectorXd k1 = rate(state.v1);
    const Eigen::VectorXd k2 = rate(state.v1 + 0.5 * dt * k1);
    const Eigen::VectorXd k3 = rate(state.v1 + 0.5 * dt * k2);
    const Eigen::VectorXd k4 = rate(state.v1 + dt * k3);

    ReservoirState next;
    next.v1 = state.v1 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next.t = state.t + dt;
    next.v_d.resize(n);
    const Eigen::VectorXd v_g = coupling.f.cwiseProduct(next.v1) + drive;
    for (Eigen::Index i = 0; i < n; ++i) next.v_d(i) = dev.drain(i, v_g(i), next.v1(i)).v_d;

    if (!detail::all_finite(next.v1) || !detail::all_finite(next.v_d))
        throw IntegrationDivergence("reservoir_step: non-finite reservoir state", step_index);
    return next;
}

inline ReservoirState reservoir_step(std::span<const OectParams> devices,
                                     const CouplingMatrix& coupling, const ReservoirState& state,
                                     const Eigen::VectorXd& external, double dt,
                                     std::size_t step_index = 0) {
    return reservoir_step(DeviceArray(devices), coupling, state, external, dt, step_index);
}

/// A driven OECT network. Inputs live in task space and reach the gates
/// through W_in; the exposed state is the drain-voltage vector.
class OectReservoir {
public:
    OectReservoir(std::span<const OectParams> devices, CouplingMatrix coupling, InputMatrix w_in,
                  double dt)
        : dev_(devices), coupling_(std::move(coupling)), w_in_(std::move(w_in)), dt_(dt) {
        detail::require(dt > 0.0, "OectReservoir: dt must be positive");
        detail::require_shape(coupling_.size() == dev_.size() && w_in_.w_in.rows() == dev_.size(),
                              "OectReservoir: coupling / input matrix size differs from device count");
        state_ = initial_state(dev_);
    }

    void drive(const Eigen::VectorXd& u) {
        detail::require_shape(u.size() == w_in_.w_in.cols(), "OectReservoir::drive: input dimension");
        state_ = reservoir_step(dev_, coupling_, state_, w_in_.w_in * u, dt_, steps_);
        ++steps_;
    }

    /// Advances with an explicit gate-voltage contribution instead of a task input.
    void drive_external(const Eigen::VectorXd& external) {
        state_ = reservoir_step(dev_, coupling_, state_, external, dt_, steps_);
        ++steps_;
    }

    const Eigen::VectorXd& state() const noexcept { return state_.v_d; }
    Eigen::Index size() const noexcept { return dev_.size(); }
    Eigen::Index input_dim() const noexcept { return w_in_.w_in.cols(); }
    double time() const noexcept { return state_.t; }

    const ReservoirState& full_state() const noexcept { return state_; }
    void set_state(ReservoirState s) {
        detail::require_shape(s.size() == dev_.size() && s.v_d.size() == dev_.size(),
                              "OectReservoir::set_state: size mismatch");
        state_ = std::move(s);
    }

    const DeviceArray& devices() const noexcept { return dev_; }
    const CouplingMatrix& coupling() const noexcept { return coupling_; }
    const InputMatrix& input_matrix() const noexcept { return w_in_; }
    double dt() const noexcept { return dt_; }

private:
    DeviceArray dev_;
    CouplingMatrix coupling_;
    InputMatrix w_in_;
    double dt_;
    ReservoirState state_;
    std::size_t steps_ = 0;
};

static_assert(Reservoir<OectReservoir>);

/// Teacher-forced run: row j of `drive` is applied through W_in on step j.
inline StateHistory run_open_loop(std::span<const OectParams> devices,
                                  const CouplingMatrix& coupling, const InputMatrix& w_in,
                                  const Eigen::MatrixXd& drive, double dt,
                                  const ReservoirState& initial) {
    detail::require(drive.rows() >= 1, "run_open_loop: drive must have at least one row");
    OectReservoir res(devices, coupling, w_in, dt);
    res.set_state(initial);
    return drive_open_loop(res, drive);
}

/// Autonomous run: the gates receive W_in W_out V_D from the previous step.
/// Row j is the prediction W_out V_D after step j + 1.
inline Eigen::MatrixXd run_closed_loop(std::span<const OectParams> devices,
                                       const CouplingMatrix& coupling, const InputMatrix& w_in,
                                       const ReadoutMatrix& w_out, const ReservoirState& initial,
                                       std::size_t steps, double dt) {
    detail::require_shape(w_out.task_dim() == w_in.w_in.cols() &&
                              w_out.reservoir_size() == w_in.w_in.rows(),
                          "run_closed_loop: readout shape inconsistent with input matrix");
    OectReservoir res(devices, coupling, w_in, dt);
    res.set_state(initial);
    return drive_closed_loop(res, w_out.w_out, steps);
}

/// Debug dump with header "t,vd_0,...,vd_{n-1}".
inline void write_trajectory_csv(const StateHistory& h, const std::string& path) {
    auto out = io::open_for_write(path);
    out << 't';
    for (Eigen::Index i = 0; i < h.states.cols(); ++i) out << ",vd_" << i;
    out << '\n';
    for (Eigen::Index j = 0; j < h.rows(); ++j) {
        out << io::format_double(h.times(j));
        for (Eigen::Index i = 0; i < h.states.cols(); ++i) out << ',' << io::format_double(h.states(j, i));
        out << '\n';
    }
    io::finish_write(out, path);
}

}  // namespace oect
