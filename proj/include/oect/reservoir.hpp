#pragma once

// Interface shared by every reservoir model, plus the teacher-forced and
// autonomous drivers that run any of them. The OECT network and the tanh
// baseline differ only in how one step advances the state; everything
// downstream (training, prediction, scoring) goes through these functions.

#include "errors.hpp"

#include <Eigen/Dense>

#include <concepts>
#include <cstddef>

namespace oect {

/// Recorded open-loop run. Row j of `states` is the reservoir state after the
/// step driven by row j of `inputs`; `times` holds the time at the end of that
/// step. For the OECT reservoir the state is the drain-voltage vector.
struct StateHistory {
    Eigen::VectorXd times;
    Eigen::MatrixXd states;
    Eigen::MatrixXd inputs;

    Eigen::Index rows() const noexcept { return states.rows(); }
};

template <class R>
concept Reservoir = requires(R& r, const R& cr, const Eigen::VectorXd& u) {
    r.drive(u);
    { cr.state() } -> std::convertible_to<Eigen::VectorXd>;
    { cr.size() } -> std::convertible_to<Eigen::Index>;
    { cr.input_dim() } -> std::convertible_to<Eigen::Index>;
    { cr.time() } -> std::convertible_to<double>;
};

/// Drives the reservoir with each row of `drive` in turn and records states.
template <Reservoir R>
StateHistory drive_open_loop(R& res, const Eigen::MatrixXd& drive) {
    detail::require_shape(drive.cols() == res.input_dim(),
                          "drive_open_loop: drive width differs from reservoir input dimension");
    const Eigen::Index steps = drive.rows();
    StateHistory h{Eigen::VectorXd(steps), Eigen::MatrixXd(steps, res.size()), drive};
    for (Eigen::Index j = 0; j < steps; ++j) {
        res.drive(drive.row(j).transpose());
        h.times(j) = res.time();
        h.states.row(j) = res.state().transpose();
    }
    return h;
}

/// Runs autonomously: the readout of the current state is fed back as the next
/// input. Row j of the result is the readout after step j + 1.
template <Reservoir R>
Eigen::MatrixXd drive_closed_loop(R& res, const Eigen::MatrixXd& w_out, std::size_t steps) {
    detail::require_shape(w_out.cols() == res.size() && w_out.rows() == res.input_dim(),
                          "drive_closed_loop: readout shape does not match reservoir");
    const auto T = static_cast<Eigen::Index>(steps);
    Eigen::MatrixXd pred(T, w_out.rows());
    Eigen::VectorXd z = w_out * res.state();
    for (Eigen::Index j = 0; j < T; ++j) {
        res.drive(z);
        z = w_out * res.state();
        pred.row(j) = z.transpose();
    }
    return pred;
}

}  // namespace oect
