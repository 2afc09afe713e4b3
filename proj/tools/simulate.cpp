// Command-line front end: runs a forecast-horizon sweep and writes the
// aggregated table as CSV.
//
//   simulate --config exp.cfg --axis v_p_mean --values -0.6,-0.2,0.2 --out fh.csv

#include "oect/oect.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    CLI::App app{"Reservoir-computing forecast-horizon experiments on OECT networks"};

    std::string config_path;
    std::string axis_name;
    std::string values_csv;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::string kind;
    std::string out_path;
    std::string trials_path;
    std::vector<std::string> overrides;

    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--axis", axis_name, "sweep axis: n, v_p_mean, p or alpha");
    app.add_option("--values", values_csv, "comma-separated axis values");
    app.add_option("--trials", trials, "trials per value");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--threads", threads, "worker threads (0: all cores)");
    app.add_option("--kind", kind, "reservoir kind")->check(CLI::IsMember({"oect", "tanh"}));
    app.add_option("--out", out_path, "results CSV (default: stdout)");
    app.add_option("--trial-dump", trials_path, "optional per-trial CSV");
    app.add_option("--set", overrides, "extra config assignment key=value (repeatable)");

    CLI11_PARSE(app, argc, argv);

    try {
        oect::ExperimentConfig cfg = config_path.empty() ? oect::ExperimentConfig{}
                                                         : oect::load_config(config_path);
        for (const auto& o : overrides) {
            auto eq = o.find('=');
            if (eq == std::string::npos) throw oect::InvalidArgument("--set expects key=value, got '" + o + "'");
            oect::set_config_value(cfg, std::string_view(o).substr(0, eq), std::string_view(o).substr(eq + 1));
        }
        if (trials) cfg.trials = *trials;
        if (seed) cfg.master_seed = *seed;
        if (threads) cfg.threads = *threads;
        if (!kind.empty()) cfg.kind = oect::parse_kind(kind);
        cfg.validate();

        if (axis_name.empty() != values_csv.empty())
            throw oect::InvalidArgument("--axis and --values must be given together");

        oect::SweepAxis axis = oect::SweepAxis::N;
        std::vector<double> values{static_cast<double>(cfg.n)};
        if (!axis_name.empty()) {
            axis = oect::parse_axis(axis_name);
            values.clear();
            for (const auto& v : oect::io::split(values_csv, ',')) values.push_back(oect::io::parse_double(v));
        }

        const oect::SweepTable table = oect::sweep(cfg, axis, values);
        if (out_path.empty())
            std::cout << oect::format_results(table);
        else
            oect::export_results(table, out_path);
        if (!trials_path.empty()) oect::export_trials(table, trials_path);
    } catch (const oect::Error& e) {
        std::fprintf(stderr, "simulate: %s\n", e.what());
        return 1;
    }
    return 0;
}
