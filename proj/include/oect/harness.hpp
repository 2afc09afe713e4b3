#pragma once

// Seeded trial orchestration, parameter sweeps and result export.
//
// Every trial draws a fresh reservoir and a fresh Lorenz initial condition
// from a generator seeded by derive_seed(master_seed, value_index,
// trial_index), so a sweep is a pure function of its configuration and
// master seed and trials can run in any order on any number of threads.

#include "baseline.hpp"
#include "config.hpp"
#include "dynamics.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "network.hpp"
#include "pipeline.hpp"
#include "rng.hpp"
#include "tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace oect {

/// Samples devices, topology (with device gate resistances) and W_in, in that
/// order.
inline OectReservoir make_oect_reservoir(const ExperimentConfig& cfg, Rng& rng) {
    const auto devices = sample_device_array(cfg.params, cfg.n, rng);
    ResistorNetwork net = sample_topology(cfg.n, cfg.p, rng, cfg.r_w_low, cfg.r_w_high);
    net = with_gate_resistances(std::move(net), devices);
    InputMatrix w_in = sample_input_matrix(cfg.n, 3, cfg.sigma_in, rng);
    return OectReservoir(devices, effective_coupling(net, cfg.leak_neglected), std::move(w_in),
                         cfg.dt * cfg.time_scale);
}

/// Full forecast run for the configured reservoir kind.
inline ForecastRun run_forecast(const ExperimentConfig& cfg, Rng& rng) {
    cfg.validate();
    if (cfg.kind == ReservoirKind::Tanh) {
        TanhReservoir res = make_tanh_reservoir(cfg, rng);
        const Eigen::Vector3d u0 = sample_lorenz_ic(rng, cfg.lorenz, cfg.dt, cfg.ic_perturbation_std);
        return train_and_forecast(res, cfg, u0);
    }
    OectReservoir res = make_oect_reservoir(cfg, rng);
    const Eigen::Vector3d u0 = sample_lorenz_ic(rng, cfg.lorenz, cfg.dt, cfg.ic_perturbation_std);
    return train_and_forecast(res, cfg, u0);
}

inline std::uint64_t trial_seed(const ExperimentConfig& cfg, std::size_t value_index,
                                std::size_t trial_index) noexcept {
    return derive_seed({cfg.master_seed, value_index, trial_index});
}

struct TrialRecord {
    std::size_t trial = 0;
    ForecastResult fh;
    bool failed = false;
    std::string error;  ///< failure reason when `failed`
};

/// Runs one seeded trial. Numerical failures (ill-conditioned fit, divergent
/// integration) become failed records; configuration errors propagate.
inline TrialRecord run_trial(const ExperimentConfig& cfg, std::size_t trial_index,
                             std::size_t value_index = 0) {
    cfg.validate();
    TrialRecord rec;
    rec.trial = trial_index;
    Rng rng(trial_seed(cfg, value_index, trial_index));
    try {
        rec.fh = run_forecast(cfg, rng).fh;
    } catch (const IllConditioned& e) {
        rec.failed = true;
        rec.error = e.what();
    } catch (const IntegrationDivergence& e) {
        rec.failed = true;
        rec.error = e.what();
    }
    return rec;
}

/// Runs trials [0, cfg.trials) for one sweep value, on `cfg.threads` workers.
/// Results are stored by trial index, so the output does not depend on
/// scheduling.
inline std::vector<TrialRecord> run_trials(const ExperimentConfig& cfg, std::size_t value_index = 0) {
    cfg.validate();
    std::vector<TrialRecord> out(cfg.trials);
    std::size_t workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cfg.trials);
    if (workers <= 1) {
        for (std::size_t t = 0; t < cfg.trials; ++t) out[t] = run_trial(cfg, t, value_index);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t t = next++; t < cfg.trials; t = next++)
                    out[t] = run_trial(cfg, t, value_index);
            } catch (...) {
                errors[w] = std::current_exception();
                next = cfg.trials;
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

/// Neumaier-compensated sum.
inline double compensated_sum(std::span<const double> xs) noexcept {
    double sum = 0.0, c = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            c += (sum - t) + x;
        else
            c += (x - t) + sum;
        sum = t;
    }
    return sum + c;
}

struct SummaryStats {
    double mean = std::nan("");
    double std = std::nan("");  ///< sample standard deviation; 0 for one value
    std::size_t count = 0;
};

inline SummaryStats summarize(std::span<const double> xs) {
    SummaryStats s;
    s.count = xs.size();
    if (xs.empty()) return s;
    const double n = static_cast<double>(xs.size());
    s.mean = compensated_sum(xs) / n;
    if (xs.size() == 1) {
        s.std = 0.0;
        return s;
    }
    std::vector<double> sq(xs.size());
    std::transform(xs.begin(), xs.end(), sq.begin(), [&](double x) { return (x - s.mean) * (x - s.mean); });
    s.std = std::sqrt(compensated_sum(sq) / (n - 1.0));
    return s;
}

enum class SweepAxis { N, VpMean, P, Alpha };

inline std::string_view to_string(SweepAxis a) noexcept {
    switch (a) {
        case SweepAxis::N: return "n";
        case SweepAxis::VpMean: return "v_p_mean";
        case SweepAxis::P: return "p";
        case SweepAxis::Alpha: return "alpha";
    }
    return "?";
}

inline SweepAxis parse_axis(std::string_view s) {
    if (s == "n") return SweepAxis::N;
    if (s == "v_p_mean") return SweepAxis::VpMean;
    if (s == "p") return SweepAxis::P;
    if (s == "alpha") return SweepAxis::Alpha;
    throw InvalidArgument("unknown sweep axis '" + std::string(s) + "' (expected n, v_p_mean, p or alpha)");
}

inline ExperimentConfig with_axis_value(ExperimentConfig cfg, SweepAxis axis, double value) {
    switch (axis) {
        case SweepAxis::N:
            detail::require(value >= 1.0 && value == std::floor(value), "sweep: n values must be positive integers");
            cfg.n = static_cast<std::size_t>(value);
            break;
        case SweepAxis::VpMean: cfg.params.v_p.mean = value; break;
        case SweepAxis::P: cfg.p = value; break;
        case SweepAxis::Alpha: cfg.alpha = value; break;
    }
    cfg.validate();
    return cfg;
}

struct SweepRow {
    double value = 0.0;
    double mean_fh = std::nan("");
    double std_fh = std::nan("");
    std::size_t trials = 0;
    std::size_t failures = 0;
};

struct SweepTable {
    std::string axis;
    std::vector<SweepRow> rows;
    /// Per-trial records, parallel to `rows`. Not part of the exported table.
    std::vector<std::vector<TrialRecord>> records;
};

/// Aggregates trial records; statistics cover successful trials only.
inline SweepRow aggregate(double value, std::span<const TrialRecord> records) {
    std::vector<double> fh;
    fh.reserve(records.size());
    SweepRow row;
    row.value = value;
    row.trials = records.size();
    for (const auto& r : records) {
        if (r.failed)
            ++row.failures;
        else
            fh.push_back(r.fh.horizon);
    }
    const auto s = summarize(fh);
    row.mean_fh = s.mean;
    row.std_fh = s.std;
    return row;
}

inline SweepTable sweep(const ExperimentConfig& cfg, SweepAxis axis, std::span<const double> values) {
    detail::require(!values.empty(), "sweep: no values given");
    SweepTable table;
    table.axis = std::string(to_string(axis));
    for (std::size_t v = 0; v < values.size(); ++v) {
        const ExperimentConfig local = with_axis_value(cfg, axis, values[v]);
        auto records = run_trials(local, v);
        table.rows.push_back(aggregate(values[v], records));
        table.records.push_back(std::move(records));
    }
    return table;
}

/// CSV with header "axis,value,mean_fh,std_fh,trials,failures".
inline std::string format_results(const SweepTable& table) {
    std::string s = "axis,value,mean_fh,std_fh,trials,failures\n";
    for (const auto& r : table.rows) {
        s += table.axis;
        s += ',' + io::format_double(r.value);
        s += ',' + io::format_double(r.mean_fh);
        s += ',' + io::format_double(r.std_fh);
        s += ',' + std::to_string(r.trials);
        s += ',' + std::to_string(r.failures);
        s += '\n';
    }
    return s;
}

inline void export_results(const SweepTable& table, const std::string& path) {
    auto out = io::open_for_write(path);
    out << format_results(table);
    io::finish_write(out, path);
}

inline SweepTable parse_results(std::string_view text) {
    auto lines = io::split(text, '\n');
    if (lines.empty() || lines[0] != "axis,value,mean_fh,std_fh,trials,failures")
        throw InvalidArgument("parse_results: missing header");
    SweepTable t;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        auto f = io::split(lines[i], ',');
        if (f.size() != 6) throw InvalidArgument("parse_results: malformed line " + std::to_string(i + 1));
        if (t.axis.empty()) t.axis = f[0];
        if (f[0] != t.axis) throw InvalidArgument("parse_results: mixed axes");
        SweepRow r;
        r.value = io::parse_double(f[1]);
        r.mean_fh = io::parse_double(f[2]);
        r.std_fh = io::parse_double(f[3]);
        r.trials = static_cast<std::size_t>(detail::parse_uint(f[4]));
        r.failures = static_cast<std::size_t>(detail::parse_uint(f[5]));
        t.rows.push_back(r);
    }
    return t;
}

inline SweepTable read_results(const std::string& path) {
    auto in = io::open_for_read(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_results(ss.str());
}

/// Per-trial dump with header "trial,value,fh,exceeded,failed".
inline void export_trials(const SweepTable& table, const std::string& path) {
    auto out = io::open_for_write(path);
    out << "trial,value,fh,exceeded,failed\n";
    for (std::size_t v = 0; v < table.records.size(); ++v) {
        for (const auto& r : table.records[v]) {
            out << r.trial << ',' << io::format_double(table.rows[v].value) << ','
                << (r.failed ? std::string("nan") : io::format_double(r.fh.horizon)) << ','
                << (r.fh.exceeded ? 1 : 0) << ',' << (r.failed ? 1 : 0) << '\n';
        }
    }
    io::finish_write(out, path);
}

}  // namespace oect
