#pragma once

// Train-then-forecast protocol shared by every reservoir kind:
//   1. generate a Lorenz trajectory from the trial's initial condition,
//   2. drive the reservoir with it, pairing the state after the step driven
//      by u(t) with the target u(t + dt),
//   3. fit the readout on the post-washout window,
//   4. run closed loop from the end of training and score against the
//      continuation of the same trajectory.

#include "config.hpp"
#include "readout.hpp"
#include "reservoir.hpp"
#include "tasks.hpp"

#include <Eigen/Dense>

namespace oect {

struct ForecastRun {
    ForecastResult fh;
    TaskSeries truth;       ///< ground truth at t = dt, 2 dt, ... after training
    TaskSeries prediction;  ///< closed-loop readout on the same grid
    ReadoutMatrix readout;
};

template <Reservoir R>
ForecastRun train_and_forecast(R& res, const ExperimentConfig& cfg, const Eigen::Vector3d& u0) {
    cfg.validate();
    const std::size_t washout = cfg.washout_steps();
    const std::size_t fit = cfg.fit_steps();
    const std::size_t horizon = cfg.predict_steps();
    const auto k = static_cast<Eigen::Index>(washout + fit);
    const auto h = static_cast<Eigen::Index>(horizon);

    const TaskSeries series = integrate_rk4(cfg.lorenz, u0, cfg.dt, washout + fit + horizon);
    const StateHistory history = drive_open_loop(res, series.rows.topRows(k));
    ForecastRun run;
    run.readout = ridge_fit(history, series.rows.middleRows(1, k), cfg.alpha,
                            TrainingWindow{washout, fit});

    run.truth = TaskSeries{cfg.dt, cfg.dt, series.rows.middleRows(k + 1, h)};
    run.prediction = TaskSeries{cfg.dt, cfg.dt, drive_closed_loop(res, run.readout.w_out, horizon)};
    run.fh = forecast_horizon(run.truth, run.prediction, cfg.delta);
    return run;
}

}  // namespace oect
