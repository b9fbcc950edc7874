// Command line front end: run a scenario, run the manufactured-solution
// convergence study, sweep a parameter grid, or re-validate the identities
// recorded in a series file.
//
// Exit codes: 0 success, 1 config error, 2 I/O error, 3 identity-check
// failure in `check`.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sphflow/harness.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw sphflow::IoError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int run_command(const std::string& configPath, const std::string& outDir,
                double outputInterval, unsigned seed, bool haveSeed) {
    sphflow::ScenarioConfig cfg = sphflow::scenario_from_json(slurp(configPath));
    if (outputInterval > 0.0) cfg.outputInterval = outputInterval;
    if (haveSeed) cfg.seed = seed;
    sphflow::RunOutput out = sphflow::run_simulation(cfg);
    std::string series = sphflow::write_outputs(out, outDir);
    std::cout << "run " << cfg.name << ": "
              << sphflow::termination_name(out.summary.termination) << " at t="
              << out.summary.finalTime << " (" << out.summary.steps
              << " steps, " << out.summary.rejections << " rejections)\n"
              << "series: " << series << "\n";
    return 0;
}

int mms_command(const std::string& configPath, const std::string& outDir) {
    sphflow::MmsConfig cfg = sphflow::mms_from_json(slurp(configPath));
    auto rows = sphflow::run_mms(cfg);
    std::error_code ec;
    std::filesystem::create_directories(outDir, ec);
    if (ec) throw sphflow::IoError("cannot create output directory: " + outDir);
    std::ofstream f(outDir + "/mms_convergence.csv");
    if (!f) throw sphflow::IoError("cannot open output file under " + outDir);
    f << "grid_size,err_volume,err_velocity,err_temperature,err_max,observed_order\n";
    std::printf("%8s %12s %12s %12s %12s %8s\n", "cells", "err_v", "err_u",
                "err_theta", "err_max", "order");
    for (const auto& r : rows) {
        std::printf("%8zu %12.4e %12.4e %12.4e %12.4e %8.3f\n", r.gridSize,
                    r.errVolume, r.errVelocity, r.errTemperature, r.errMax,
                    r.observedOrder);
        char line[256];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.gridSize, r.errVolume, r.errVelocity, r.errTemperature,
                      r.errMax, r.observedOrder);
        f << line;
    }
    return 0;
}

int sweep_command(const std::string& configPath, const std::string& outDir) {
    sphflow::SweepConfig cfg = sphflow::sweep_from_json(slurp(configPath));
    auto rows = sphflow::run_sweep(cfg);
    std::string path = sphflow::write_sweep_outputs(cfg, rows, outDir);
    std::size_t failed = 0;
    for (const auto& r : rows)
        if (r.failed) ++failed;
    std::cout << "sweep " << cfg.base.name << ": " << rows.size() << " runs, "
              << failed << " failed\nsummary: " << path << "\n";
    return 0;
}

int check_command(const std::string& seriesPath, double simpleTol) {
    auto failures = sphflow::check_series(seriesPath, simpleTol);
    if (failures.empty()) {
        std::cout << "check " << seriesPath << ": all identities hold\n";
        return 0;
    }
    for (const auto& msg : failures) std::cout << "FAIL " << msg << "\n";
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spherically symmetric compressible heat-conductive flow "
                 "simulator in Lagrangian mass coordinates"};
    app.require_subcommand(1);

    std::string configPath, outDir = "out", seriesPath;
    double outputInterval = 0.0, simpleTol = 1e-3;
    unsigned seed = 0;
    bool haveSeed = false;

    auto* run = app.add_subcommand("run", "run one scenario");
    run->add_option("config", configPath, "scenario config (json)")->required();
    run->add_option("--out", outDir, "output directory");
    run->add_option("--output-interval", outputInterval, "override output interval");
    run->add_option("--seed", seed, "override the scenario seed")
        ->each([&](const std::string&) { haveSeed = true; });

    auto* mms = app.add_subcommand("mms", "manufactured-solution convergence study");
    mms->add_option("config", configPath, "study config (json)")->required();
    mms->add_option("--out", outDir, "output directory");

    auto* sweep = app.add_subcommand("sweep", "parameter sweep");
    sweep->add_option("config", configPath, "sweep config (json)")->required();
    sweep->add_option("--out", outDir, "output directory");

    auto* check = app.add_subcommand("check", "re-validate a series file");
    check->add_option("timeseries", seriesPath, "series csv")->required();
    check->add_option("--simple-energy-tol", simpleTol,
                      "relative drift allowed for the simple energy");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return run_command(configPath, outDir, outputInterval, seed, haveSeed);
        if (mms->parsed()) return mms_command(configPath, outDir);
        if (sweep->parsed()) return sweep_command(configPath, outDir);
        if (check->parsed()) return check_command(seriesPath, simpleTol);
    } catch (const sphflow::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const sphflow::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
