#include "CLI11.hpp"

#include "gfpc/config.hpp"
#include "gfpc/errors.hpp"
#include "gfpc/fixtures.hpp"
#include "gfpc/report.hpp"

#include <iostream>
#include <string>
#include <vector>

namespace {

struct CommonOptions {
    std::string config_path;
    std::string out_dir;
    double dt = 0.0;
    bool has_out = false;
    bool has_dt = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("config", opts.config_path, "JSON configuration file")->required();
    cmd->add_option("--out", opts.out_dir, "output directory (overrides the config)")
        ->each([&](const std::string&) { opts.has_out = true; });
    cmd->add_option("--dt", opts.dt, "integration step in seconds (overrides the config)")
        ->each([&](const std::string&) { opts.has_dt = true; });
}

int run_batch(const CommonOptions& opts, bool simulate) {
    gfpc::DesignConfig config;
    try {
        config = gfpc::load_config(opts.config_path);
    } catch (const gfpc::ParseError& err) {
        std::cerr << err.what() << "\n";
        return gfpc::kExitUsage;
    } catch (const gfpc::ValidationError& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return gfpc::kExitUsage;
    } catch (const std::exception& err) {
        std::cerr << err.what() << "\n";
        return gfpc::kExitIo;
    }

    if (opts.has_dt) {
        config.sim.dt = opts.dt;
        try {
            gfpc::SimConfig{config.sim.t_end, config.sim.dt, config.sim.record_every}.validate();
        } catch (const gfpc::ValidationError& err) {
            std::cerr << "config error: " << err.what() << "\n";
            return gfpc::kExitUsage;
        }
    }
    if (opts.has_out) {
        config.output.directory = opts.out_dir;
    }
    return simulate ? gfpc::cmd_simulate(config, config.output.directory, std::cout)
                    : gfpc::cmd_design(config, config.output.directory, std::cout);
}

int run_verify(const std::string& fixture_name, double tol_scale) {
    gfpc::FixtureOptions options;
    options.tol_scale = tol_scale;

    std::vector<gfpc::FixtureResult> results;
    if (!fixture_name.empty()) {
        try {
            results.push_back(gfpc::run_fixture(fixture_name, options));
        } catch (const std::invalid_argument& err) {
            std::cerr << err.what() << "\navailable fixtures:";
            for (const std::string& name : gfpc::fixture_names()) std::cerr << " " << name;
            std::cerr << "\n";
            return gfpc::kExitUsage;
        }
    } else {
        results = gfpc::run_all_fixtures(options);
    }

    int passed = 0;
    for (const gfpc::FixtureResult& r : results) {
        std::cout << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail << "\n";
        if (r.passed) ++passed;
    }
    std::cout << passed << "/" << results.size() << " fixtures passed\n";
    return passed == static_cast<int>(results.size()) ? gfpc::kExitOk : gfpc::kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "gfpc - full-state-feedback power-control design for grid-forming converters\n"
        "Exit codes: 0 success, 1 verification failure, 2 design infeasibility,\n"
        "3 I/O error, 64 usage/config error."};
    app.require_subcommand(1);

    CommonOptions design_opts;
    CLI::App* design = app.add_subcommand(
        "design", "run the step-by-step design pipeline and emit a report");
    add_common(design, design_opts);

    CommonOptions sim_opts;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "design every case, simulate the configured setpoint events, export CSV");
    add_common(simulate, sim_opts);

    std::string fixture_name;
    double tol_scale = 1.0;
    CLI::App* verify = app.add_subcommand("verify", "run the built-in regression fixtures");
    verify->add_option("--fixture", fixture_name, "run a single fixture by name");
    verify->add_option("--tol", tol_scale, "scale factor on every tolerance (0 forces failure)")
        ->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& err) {
        return app.exit(err);
    } catch (const CLI::CallForAllHelp& err) {
        return app.exit(err);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return gfpc::kExitUsage;
    }

    if (design->parsed()) return run_batch(design_opts, false);
    if (simulate->parsed()) return run_batch(sim_opts, true);
    return run_verify(fixture_name, tol_scale);
}
