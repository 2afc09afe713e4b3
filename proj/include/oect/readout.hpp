#pragma once

// Linear readout: ridge-regression training and application.

#include "errors.hpp"
#include "io.hpp"
#include "reservoir.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace oect {

/// d x n map from reservoir state to task space.
struct ReadoutMatrix {
    Eigen::MatrixXd w_out;

    Eigen::Index task_dim() const noexcept { return w_out.rows(); }
    Eigen::Index reservoir_size() const noexcept { return w_out.cols(); }
};

/// Rows [washout_steps, washout_steps + fit_steps) of a history are fitted.
struct TrainingWindow {
    std::size_t washout_steps = 0;
    std::size_t fit_steps = 1;
};

/// Condition numbers above this make ridge_fit refuse to answer.
inline constexpr double kMaxCondition = 1e12;

/// Minimizes sum_j |W s_j - y_j|^2 + alpha |W|_F^2 over the window, where s_j
/// are history states and y_j the matching target rows. Solved as the
/// augmented least-squares problem [S; sqrt(alpha) I] W^T = [Y; 0] by
/// Householder QR, never through the normal equations.
inline ReadoutMatrix ridge_fit(const StateHistory& history, const Eigen::MatrixXd& targets,
                               double alpha, const TrainingWindow& window) {
    detail::require(alpha >= 0.0 && std::isfinite(alpha), "ridge_fit: alpha must be >= 0");
    detail::require(window.fit_steps >= 1, "ridge_fit: fit_steps must be >= 1");
    detail::require_shape(history.rows() == targets.rows(),
                          "ridge_fit: history and targets have different row counts");
    const auto first = static_cast<Eigen::Index>(window.washout_steps);
    const auto m = static_cast<Eigen::Index>(window.fit_steps);
    detail::require(history.rows() >= first + m, "ridge_fit: history shorter than washout + fit");

    const Eigen::Index n = history.states.cols();
    const Eigen::Index d = targets.cols();
    const bool regularized = alpha > 0.0;
    const Eigen::Index rows = m + (regularized ? n : 0);
    if (rows < n)
        throw IllConditioned("ridge_fit: fewer samples than states with alpha = 0",
                             std::numeric_limits<double>::infinity());

    Eigen::MatrixXd lhs(rows, n);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(rows, d);
    lhs.topRows(m) = history.states.middleRows(first, m);
    rhs.topRows(m) = targets.middleRows(first, m);
    if (regularized)
        lhs.bottomRows(n) = std::sqrt(alpha) * Eigen::MatrixXd::Identity(n, n);

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(lhs);
    const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(r).singularValues();
    const double cond = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
    if (!(cond <= kMaxCondition)) {
        std::ostringstream msg;
        msg << "ridge_fit: regression matrix is ill-conditioned (condition " << cond << ")";
        throw IllConditioned(msg.str(), cond);
    }
    return {qr.solve(rhs).transpose()};
}

inline Eigen::VectorXd readout_apply(const ReadoutMatrix& w, const Eigen::VectorXd& state) {
    detail::require_shape(w.w_out.cols() == state.size(),
                          "readout_apply: state length differs from readout width");
    return w.w_out * state;
}

/// Plain-text matrix: first line "d n", then d lines of n space-separated values.
inline void save_readout(const ReadoutMatrix& w, const std::string& path) {
    auto out = io::open_for_write(path);
    out << w.w_out.rows() << ' ' << w.w_out.cols() << '\n';
    for (Eigen::Index i = 0; i < w.w_out.rows(); ++i) {
        for (Eigen::Index j = 0; j < w.w_out.cols(); ++j) {
            if (j) out << ' ';
            out << io::format_double(w.w_out(i, j));
        }
        out << '\n';
    }
    io::finish_write(out, path);
}

inline ReadoutMatrix load_readout(const std::string& path) {
    auto in = io::open_for_read(path);
    Eigen::Index d = 0, n = 0;
    if (!(in >> d >> n) || d < 0 || n < 0) throw IoError("'" + path + "': bad readout header");
    ReadoutMatrix w{Eigen::MatrixXd(d, n)};
    std::string tok;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!(in >> tok)) throw IoError("'" + path + "': truncated readout matrix");
            w.w_out(i, j) = io::parse_double(tok);
        }
    return w;
}

}  // namespace oect
