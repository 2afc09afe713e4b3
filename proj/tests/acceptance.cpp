// Acceptance suite: runs every acceptance criterion at full size and prints
// one PASS/FAIL line each. Exit status is nonzero if any criterion fails.

#include "oect/oect.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome device_oracle() {
    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0, regime_mismatch = 0;
    double worst = 0.0;
    while (checked < 10000) {
        const auto p = oracle::random_device(rng);
        const double vg = u(rng), v1 = u(rng);
        const double b = oect::derived_coefficients(p).b;
        const auto root = oracle::solve_drain_by_bisection(p, vg, v1, -(2.0 / b + 20.0), 20.0);
        if (!root || root->margin < 1e-6) continue;
        const auto s = oect::drain_voltage(p, vg, v1);
        worst = std::max(worst, std::abs(s.v_d - root->v_d));
        if (static_cast<int>(s.regime) != static_cast<int>(root->branch)) ++regime_mismatch;
        ++checked;
    }
    return {worst <= 1e-9 && regime_mismatch == 0,
            fmt("%d samples, max |dV_D| = %.3g V, regime mismatches = %d", checked, worst, regime_mismatch)};
}

Outcome ridge_oracle() {
    std::mt19937_64 rng(202);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> dim(2, 12);
    std::uniform_real_distribution<double> log_alpha(-6.0, 0.0);
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const int n = dim(rng), d = 1 + k % 3, t = 4 * n + dim(rng);
        Eigen::MatrixXd s(t, n), y(t, d);
        for (auto* m : {&s, &y})
            for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = g(rng);
        const double alpha = std::pow(10.0, log_alpha(rng));
        const oect::StateHistory h{Eigen::VectorXd::Zero(t), s, Eigen::MatrixXd::Zero(t, 1)};
        const auto w = oect::ridge_fit(h, y, alpha, {0, static_cast<std::size_t>(t)});
        const Eigen::MatrixXd ref = oracle::ridge_normal_equations(s, y, alpha);
        worst = std::max(worst, (w.w_out - ref).norm() / ref.norm());
    }
    return {worst <= 1e-8, fmt("20 instances, max relative error = %.3g", worst)};
}

Outcome row_stochastic() {
    oect::Rng rng(303);
    const double ps[] = {0.1, 0.5, 1.0};
    double worst_row = 0.0, worst_rho = 0.0, worst_leak = 0.0;
    for (int k = 0; k < 50; ++k) {
        const auto devs = oect::sample_device_array(oect::ParamDistributions{}, 100, rng);
        const auto net = oect::with_gate_resistances(oect::sample_topology(100, ps[k % 3], rng), devs);
        const auto c = oect::effective_coupling(net, true);
        for (Eigen::Index i = 0; i < 100; ++i)
            if (c.s(i) > 0.0) worst_row = std::max(worst_row, std::abs(c.a.row(i).sum() - 1.0));
        const Eigen::VectorXd start = Eigen::VectorXd::Ones(100) + 0.5 * Eigen::VectorXd::Random(100).cwiseAbs();
        worst_rho = std::max(worst_rho, std::abs(oect::power_iteration_radius(c.a, start, 2000) - 1.0));
        const auto leaky = oect::effective_coupling(net, false);
        for (Eigen::Index i = 0; i < 100; ++i)
            worst_leak = std::max(worst_leak, std::abs(leaky.f(i) + leaky.a.row(i).sum() - 1.0));
    }
    return {worst_row <= 1e-12 && worst_rho <= 1e-9 && worst_leak <= 1e-12,
            fmt("50 networks, max |row sum - 1| = %.3g, max |rho - 1| = %.3g, max |f + row - 1| = %.3g",
                worst_row, worst_rho, worst_leak)};
}

Outcome integrator_order() {
    // Isolated node relaxing toward a constant gate drive.
    const std::vector<oect::OectParams> dev(1);
    const double tau = dev[0].tau(), g = 0.3, t_end = 5.0 * tau;
    const oect::CouplingMatrix none{Eigen::MatrixXd::Zero(1, 1), Eigen::VectorXd::Zero(1), Eigen::VectorXd::Zero(1), true};
    auto device_err = [&](double dt) {
        oect::ReservoirState s = oect::initial_state(dev);
        const auto steps = std::llround(t_end / dt);
        for (long long k = 0; k < steps; ++k) s = oect::reservoir_step(dev, none, s, Eigen::VectorXd::Constant(1, g), dt);
        return std::abs(s.v1(0) - g * (1.0 - std::exp(-t_end / tau)));
    };
    const double r_dev = device_err(tau / 5.0) / device_err(tau / 10.0);

    const oect::LorenzParams lp;
    auto lorenz_err = [&](double dt, std::size_t steps) {
        return std::abs(oect::integrate_rk4(lp, Eigen::Vector3d(0, 0, 1), dt, steps).rows(steps, 2) - std::exp(-lp.beta));
    };
    const double r_lor = lorenz_err(0.01, 100) / lorenz_err(0.005, 200);
    return {r_dev >= 12.0 && r_dev <= 20.0 && r_lor >= 12.0 && r_lor <= 20.0,
            fmt("error ratio device = %.3f, Lorenz z-axis = %.3f", r_dev, r_lor)};
}

Outcome climate() {
    oect::ExperimentConfig cfg;
    cfg.predict_duration = 50.0;
    int ok = 0, failed = 0;
    for (std::size_t k = 0; k < 20; ++k) {
        oect::Rng rng(oect::trial_seed(cfg, 0, k));
        try {
            const auto run = oect::run_forecast(cfg, rng);
            const Eigen::MatrixXd& p = run.prediction.rows;
            bool inside = true;
            int crossings = 0;
            for (Eigen::Index i = 0; i < p.rows(); ++i) {
                if (std::abs(p(i, 0)) > 25.0 || std::abs(p(i, 1)) > 30.0 || p(i, 2) < 0.0 || p(i, 2) > 50.0) inside = false;
                if (i > 0 && (p(i, 0) > 0.0) != (p(i - 1, 0) > 0.0)) ++crossings;
            }
            if (inside && crossings >= 5) ++ok;
        } catch (const oect::IntegrationDivergence&) {
            ++failed;
        } catch (const oect::IllConditioned&) {
            ++failed;
        }
    }
    return {ok >= 15, fmt("%d/20 trials bounded with >= 5 x = 0 crossings (%d numerical failures)", ok, failed)};
}

oect::SweepTable run_sweep(const oect::ExperimentConfig& cfg, oect::SweepAxis axis, std::vector<double> values) {
    return oect::sweep(cfg, axis, values);
}

Outcome comparable() {
    oect::ExperimentConfig cfg;
    auto tanh = cfg;
    tanh.kind = oect::ReservoirKind::Tanh;
    const auto o = run_sweep(cfg, oect::SweepAxis::N, {100, 25});
    const auto t = run_sweep(tanh, oect::SweepAxis::N, {100, 25});
    const double o100 = o.rows[0].mean_fh, o25 = o.rows[1].mean_fh;
    const double t100 = t.rows[0].mean_fh, t25 = t.rows[1].mean_fh;
    const double ratio = o100 / t100;
    return {o100 > 1.0 && ratio >= 0.5 && ratio <= 2.0 && o100 > o25 && t100 > t25,
            fmt("OECT FH N=100 %.3f, N=25 %.3f; tanh FH N=100 %.3f, N=25 %.3f; ratio %.3f", o100, o25, t100, t25,
                ratio)};
}

Outcome pinch_off() {
    const auto s = run_sweep(oect::ExperimentConfig{}, oect::SweepAxis::VpMean, {-0.6, 0.2});
    return {s.rows[0].mean_fh > s.rows[1].mean_fh,
            fmt("mean FH at V_p = -0.6 V: %.3f, at +0.2 V: %.3f", s.rows[0].mean_fh, s.rows[1].mean_fh)};
}

Outcome flatness() {
    const auto s = run_sweep(oect::ExperimentConfig{}, oect::SweepAxis::P, {0.1, 0.5, 0.9});
    double lo = INFINITY, hi = -INFINITY, sd = 0.0;
    for (const auto& r : s.rows) {
        lo = std::min(lo, r.mean_fh);
        hi = std::max(hi, r.mean_fh);
        sd = std::max(sd, r.std_fh);
    }
    return {hi - lo < sd, fmt("means %.3f / %.3f / %.3f, spread %.3f vs max std %.3f", s.rows[0].mean_fh,
                              s.rows[1].mean_fh, s.rows[2].mean_fh, hi - lo, sd)};
}

Outcome ridge_trend() {
    const auto s = run_sweep(oect::ExperimentConfig{}, oect::SweepAxis::Alpha, {1e-7, 1e-2});
    return {s.rows[0].mean_fh >= s.rows[1].mean_fh,
            fmt("mean FH at alpha = 1e-7: %.3f, at 1e-2: %.3f", s.rows[0].mean_fh, s.rows[1].mean_fh)};
}

Outcome reproducibility() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "oect_acceptance";
    fs::create_directories(dir);
    const fs::path cfg_path = dir / "repro.cfg";
    {
        std::ofstream f(cfg_path);
        f << "# reproducibility check\nn = 50\ntrials = 6\npredict_duration = 10\nmaster_seed = 7\n";
    }
    auto once = [&](const fs::path& out, std::size_t threads) {
        auto cfg = oect::load_config(cfg_path.string());
        cfg.threads = threads;
        const std::vector<double> values{-0.6, -0.2, 0.2};
        oect::export_results(oect::sweep(cfg, oect::SweepAxis::VpMean, values), out.string());
        std::ifstream in(out, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string a = once(dir / "a.csv", 1);
    const std::string b = once(dir / "b.csv", 1);
    const std::string c = once(dir / "c.csv", 3);
    fs::remove_all(dir);
    return {!a.empty() && a == b && a == c, fmt("3-value sweep re-run twice and on 3 threads: %s",
                                                a == b && a == c ? "byte-identical" : "outputs differ")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double budget_s;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"device-model oracle", 10, device_oracle},
        {"ridge-regression oracle", 5, ridge_oracle},
        {"row-stochastic limit", 30, row_stochastic},
        {"integrator order", 10, integrator_order},
        {"closed-loop climate", 300, climate},
        {"comparable performance and N trend", 900, comparable},
        {"pinch-off trend", 600, pinch_off},
        {"connection-probability flatness", 900, flatness},
        {"ridge-parameter trend", 600, ridge_trend},
        {"reproducibility", 600, reproducibility},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto& c = criteria[i];
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
        const bool pass = o.pass && secs < c.budget_s;
        if (!pass) ++failures;
        std::printf("[%s] %2zu %s: %s (%.1f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", i + 1, c.name,
                    o.detail.c_str(), secs, c.budget_s);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
