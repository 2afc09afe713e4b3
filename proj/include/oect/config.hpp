#pragma once

// Experiment configuration and its key-value text format.
//
// A config file is a list of "key = value" lines; '#' starts a comment and
// blank lines are ignored. Every key is optional and falls back to the default
// below. Device spreads use "<field>.mean" / "<field>.std" for the fields
// v_bias, v_p, r, r_g, c_g, k_p, w, l.

#include "errors.hpp"
#include "io.hpp"
#include "network.hpp"
#include "tasks.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>

namespace oect {

enum class ReservoirKind { Oect, Tanh };

inline std::string_view to_string(ReservoirKind k) noexcept {
    return k == ReservoirKind::Oect ? "oect" : "tanh";
}

inline ReservoirKind parse_kind(std::string_view s) {
    if (s == "oect") return ReservoirKind::Oect;
    if (s == "tanh") return ReservoirKind::Tanh;
    throw InvalidArgument("unknown reservoir kind '" + std::string(s) + "' (expected oect or tanh)");
}

struct ExperimentConfig {
    ReservoirKind kind = ReservoirKind::Oect;
    std::size_t n = 100;
    double p = 0.1;

    // OECT network
    ParamDistributions params{};
    bool leak_neglected = true;
    double r_w_low = 100.0;   // [ohm]
    double r_w_high = 500.0;  // [ohm]
    double sigma_in = 1e-3;   // [V per task unit]

    // tanh baseline
    double tanh_spectral_radius = 1.0;
    double tanh_weight_scale = 1.0;
    double tanh_input_scale = 0.02;

    // task and protocol
    LorenzParams lorenz{};
    double time_scale = 5.0;  ///< device seconds per task time unit
    double ic_perturbation_std = 0.1;
    double dt = 0.005;
    double washout_duration = 10.0;
    double train_duration = 60.0;
    double predict_duration = 25.0;
    double alpha = 1e-7;
    double delta = 5.0;

    std::size_t trials = 20;
    std::uint64_t master_seed = 20240101;
    std::size_t threads = 0;  ///< 0: one worker per hardware thread

    std::size_t steps_for(double duration) const {
        return static_cast<std::size_t>(std::llround(duration / dt));
    }
    std::size_t washout_steps() const { return steps_for(washout_duration); }
    std::size_t fit_steps() const { return steps_for(train_duration); }
    std::size_t predict_steps() const { return steps_for(predict_duration); }

    void validate() const {
        detail::require(n >= 1, "config: n must be >= 1");
        detail::require(p >= 0.0 && p <= 1.0, "config: p must lie in [0, 1]");
        detail::require(dt > 0.0, "config: dt must be positive");
        detail::require(time_scale > 0.0, "config: time_scale must be positive");
        detail::require(washout_duration >= 0.0, "config: washout_duration must be >= 0");
        detail::require(train_duration > 0.0 && predict_duration > 0.0,
                        "config: train_duration and predict_duration must be positive");
        detail::require(fit_steps() >= 1, "config: train_duration is shorter than one step");
        detail::require(predict_steps() >= 1, "config: predict_duration is shorter than one step");
        detail::require(alpha >= 0.0, "config: alpha must be >= 0");
        detail::require(delta > 0.0, "config: delta must be positive");
        detail::require(trials >= 1, "config: trials must be >= 1");
        detail::require(sigma_in > 0.0, "config: sigma_in must be positive");
        detail::require(r_w_low > 0.0 && r_w_low <= r_w_high, "config: need 0 < r_w_low <= r_w_high");
        detail::require(tanh_spectral_radius >= 0.0 && tanh_weight_scale > 0.0 && tanh_input_scale > 0.0,
                        "config: bad tanh baseline parameters");
        detail::require(ic_perturbation_std >= 0.0, "config: ic_perturbation_std must be >= 0");
        params.validate();
    }
};

namespace detail {

inline bool parse_bool(std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw InvalidArgument("not a boolean: '" + std::string(v) + "'");
}

inline std::uint64_t parse_uint(std::string_view v) {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw InvalidArgument("not a non-negative integer: '" + std::string(v) + "'");
    return x;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view)>;

inline const std::map<std::string, Setter, std::less<>>& config_setters() {
    static const std::map<std::string, Setter, std::less<>> setters = [] {
        std::map<std::string, Setter, std::less<>> m;
        auto real = [&m](const char* key, double ExperimentConfig::*field) {
            m[key] = [field](ExperimentConfig& c, std::string_view v) { c.*field = io::parse_double(v); };
        };
        auto count = [&m](const char* key, std::size_t ExperimentConfig::*field) {
            m[key] = [field](ExperimentConfig& c, std::string_view v) {
                c.*field = static_cast<std::size_t>(parse_uint(v));
            };
        };
        m["kind"] = [](ExperimentConfig& c, std::string_view v) { c.kind = parse_kind(v); };
        count("n", &ExperimentConfig::n);
        real("p", &ExperimentConfig::p);
        m["leak_neglected"] = [](ExperimentConfig& c, std::string_view v) { c.leak_neglected = parse_bool(v); };
        real("r_w_low", &ExperimentConfig::r_w_low);
        real("r_w_high", &ExperimentConfig::r_w_high);
        real("sigma_in", &ExperimentConfig::sigma_in);
        real("tanh.spectral_radius", &ExperimentConfig::tanh_spectral_radius);
        real("tanh.weight_scale", &ExperimentConfig::tanh_weight_scale);
        real("tanh.input_scale", &ExperimentConfig::tanh_input_scale);
        real("ic_perturbation_std", &ExperimentConfig::ic_perturbation_std);
        real("dt", &ExperimentConfig::dt);
        real("time_scale", &ExperimentConfig::time_scale);
        real("washout_duration", &ExperimentConfig::washout_duration);
        real("train_duration", &ExperimentConfig::train_duration);
        real("predict_duration", &ExperimentConfig::predict_duration);
        real("alpha", &ExperimentConfig::alpha);
        real("delta", &ExperimentConfig::delta);
        count("trials", &ExperimentConfig::trials);
        count("threads", &ExperimentConfig::threads);
        m["master_seed"] = [](ExperimentConfig& c, std::string_view v) { c.master_seed = parse_uint(v); };
        m["lorenz.sigma"] = [](ExperimentConfig& c, std::string_view v) { c.lorenz.sigma = io::parse_double(v); };
        m["lorenz.rho"] = [](ExperimentConfig& c, std::string_view v) { c.lorenz.rho = io::parse_double(v); };
        m["lorenz.beta"] = [](ExperimentConfig& c, std::string_view v) { c.lorenz.beta = io::parse_double(v); };

        auto moments = [&m](const std::string& name, Moments ParamDistributions::*field) {
            m[name + ".mean"] = [field](ExperimentConfig& c, std::string_view v) {
                (c.params.*field).mean = io::parse_double(v);
            };
            m[name + ".std"] = [field](ExperimentConfig& c, std::string_view v) {
                (c.params.*field).std = io::parse_double(v);
            };
        };
        moments("v_bias", &ParamDistributions::v_bias);
        moments("v_p", &ParamDistributions::v_p);
        moments("r", &ParamDistributions::r);
        moments("r_g", &ParamDistributions::r_g);
        moments("c_g", &ParamDistributions::c_g);
        moments("k_p", &ParamDistributions::k_p);
        moments("w", &ParamDistributions::w);
        moments("l", &ParamDistributions::l);
        return m;
    }();
    return setters;
}

}  // namespace detail

/// Applies one "key = value" assignment to `cfg`.
inline void set_config_value(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    const auto& setters = detail::config_setters();
    auto it = setters.find(detail::trim(key));
    if (it == setters.end()) throw InvalidArgument("unknown config key '" + std::string(key) + "'");
    it->second(cfg, detail::trim(value));
}

inline ExperimentConfig parse_config(std::string_view text, const std::string& origin = "<config>") {
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    for (const auto& raw : io::split(text, '\n')) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == line.npos)
            throw InvalidArgument(origin + ":" + std::to_string(line_no) + ": expected 'key = value'");
        try {
            set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
        } catch (const InvalidArgument& e) {
            throw InvalidArgument(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    auto in = io::open_for_read(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace oect
