#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sphflow/harness.hpp"

namespace sphflow {

using nlohmann::json;

namespace {

// Shortest round-trippable decimal form keeps the files byte-stable
// across reruns of the same config.
std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* const kSeriesColumns[] = {
    "time",          "energy_E",        "dissipation_V",   "entropy_residual",
    "entropy_residual_rel", "mass_eta", "mass_shell",      "simple_energy",
    "mean_temp",     "monitor_core",    "monitor_max_rho", "monitor_max_inv_rho",
    "monitor_max_speed", "serrin_total", "serrin_rho_part", "serrin_vel_part",
    "jensen_margin_min", "ext_min_rho", "ext_max_rho",     "ext_vel_accum",
    "theta_ratio",   "u_over_r_ratio",  "mean_temp_margin", "recon_residual_max",
    "sigma_integral", "boundary_flux"};

std::vector<double> report_row(const FunctionalReport& r) {
    return {r.time,          r.energyE,        r.dissipationV,   r.entropyResidual,
            r.entropyResidualRel, r.massEta,   r.massShell,      r.simpleEnergy,
            r.meanTemp,      r.monitorCenter,  r.monitorMaxRho,  r.monitorMaxInvRho,
            r.monitorMaxSpeed, r.serrinTotal,  r.serrinRhoPart,  r.serrinVelPart,
            r.jensenMarginMin, r.extMinRho,    r.extMaxRho,      r.extVelAccum,
            r.thetaRatio,    r.uOverRRatio,    r.meanTempMargin, r.reconResidualMax,
            r.sigmaIntegral, r.boundaryFlux};
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open output file: " + path);
    return out;
}

json summary_json(const RunOutput& out) {
    const RunSummary& s = out.summary;
    json j;
    j["config"] = json::parse(scenario_to_json(out.config));
    j["termination"] = termination_name(s.termination);
    j["final_time"] = s.finalTime;
    j["steps"] = s.steps;
    j["rejections"] = s.rejections;
    j["initial_energy"] = s.initialEnergy;
    j["peak_monitor_total"] = s.peakMonitorTotal;
    j["peak_max_rho"] = s.peakMaxRho;
    j["peak_max_inv_rho"] = s.peakMaxInvRho;
    j["peak_max_speed"] = s.peakMaxSpeed;
    j["mass_drift_rel"] = s.massDriftRel;
    j["simple_energy_drift_rel"] = s.simpleEnergyDriftRel;
    j["final_entropy_residual"] = s.finalEntropyResidual;
    j["final_entropy_residual_rel"] = s.finalEntropyResidualRel;
    j["min_jensen_margin"] = s.minJensenMargin;
    j["mean_temp_margin_min"] = s.meanTempMarginMin;
    j["serrin_total"] = s.serrinTotal;
    j["factor_b_inf"] = s.bInf;
    j["factor_b_sup"] = s.bSup;
    j["factor_y_inf"] = s.yInf;
    j["factor_y_sup"] = s.ySup;
    j["y_log_rate_max"] = s.yLogRateMax;
    j["recon_residual_max"] = s.reconResidualMax;
    j["recon_residual_final"] = s.reconResidualFinal;
    j["flux_fit_a"] = s.fluxFitA;
    j["flux_fit_b"] = s.fluxFitB;
    j["jensen_radius_floor"] = s.jensenRadiusFloor;
    return j;
}

}  // namespace

std::string write_outputs(const RunOutput& out, const std::string& dir) {
    ensure_dir(dir);
    const std::string base = dir + "/" + out.config.name;

    const std::string seriesPath = base + "_series.csv";
    {
        auto f = open_out(seriesPath);
        for (std::size_t c = 0; c < std::size(kSeriesColumns); ++c)
            f << (c ? "," : "") << kSeriesColumns[c];
        f << "\n";
        for (const auto& r : out.series) {
            auto row = report_row(r);
            for (std::size_t c = 0; c < row.size(); ++c)
                f << (c ? "," : "") << fmt(row[c]);
            f << "\n";
        }
    }
    {
        auto f = open_out(base + "_summary.json");
        f << summary_json(out).dump(2) << "\n";
    }
    {
        auto f = open_out(base + "_profile.csv");
        f << "radius,density,velocity,temperature\n";
        RadialProfile prof = to_eulerian(out.finalState, out.grid);
        for (std::size_t k = 0; k < prof.samples(); ++k)
            f << fmt(prof.radii[k]) << "," << fmt(prof.density[k]) << ","
              << fmt(prof.velocity[k]) << "," << fmt(prof.temperature[k]) << "\n";
    }
    return seriesPath;
}

std::string write_sweep_outputs(const SweepConfig& cfg,
                                const std::vector<SweepRow>& rows,
                                const std::string& dir) {
    ensure_dir(dir);
    std::string path = dir + "/" + cfg.base.name + "_sweep.csv";
    auto f = open_out(path);
    f << "name";
    for (const auto& ax : cfg.axes) f << "," << ax.path;
    f << ",termination,peak_monitor_total,peak_max_rho,peak_max_inv_rho,"
         "final_entropy_residual,recon_residual_max,mass_drift_rel,error\n";
    for (const auto& row : rows) {
        f << row.name;
        for (double v : row.axisValues) f << "," << fmt(v);
        if (row.failed) {
            f << ",failed,,,,,,," << row.error << "\n";
            continue;
        }
        const RunSummary& s = row.summary;
        f << "," << termination_name(s.termination) << ","
          << fmt(s.peakMonitorTotal) << "," << fmt(s.peakMaxRho) << ","
          << fmt(s.peakMaxInvRho) << "," << fmt(s.finalEntropyResidual) << ","
          << fmt(s.reconResidualMax) << "," << fmt(s.massDriftRel) << ",\n";
    }
    return path;
}

namespace {

struct Series {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t col(const std::string& name) const {
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == name) return c;
        throw IoError("series file missing column: " + name);
    }
};

Series read_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open series file: " + path);
    Series s;
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty series file: " + path);
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) s.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        if (vals.size() != s.columns.size())
            throw IoError("ragged row in series file: " + path);
        s.rows.push_back(std::move(vals));
    }
    if (s.rows.empty()) throw IoError("series file has no rows: " + path);
    return s;
}

}  // namespace

std::vector<std::string> check_series(const std::string& seriesPath,
                                      double simpleEnergyTol) {
    Series s = read_series(seriesPath);
    std::vector<std::string> failures;
    auto fail = [&](const std::string& msg) { failures.push_back(msg); };

    const std::size_t cTime = s.col("time");
    const std::size_t cE = s.col("energy_E");
    const std::size_t cV = s.col("dissipation_V");
    const std::size_t cRes = s.col("entropy_residual");
    const std::size_t cMass = s.col("mass_shell");
    const std::size_t cSimple = s.col("simple_energy");
    const std::size_t cMeanT = s.col("mean_temp");
    const std::size_t cJensen = s.col("jensen_margin_min");
    const std::size_t cSerrin = s.col("serrin_total");
    const std::size_t cVel = s.col("ext_vel_accum");

    const double mass0 = s.rows.front()[cMass];
    const double simple0 = s.rows.front()[cSimple];
    const double e0 = s.rows.front()[cE];
    double prevTime = -std::numeric_limits<double>::infinity();
    double prevSerrin = 0.0, prevVel = 0.0;
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
        const auto& r = s.rows[i];
        std::string at = " at row " + std::to_string(i);
        if (!(r[cTime] > prevTime)) fail("time not strictly increasing" + at);
        prevTime = r[cTime];
        if (r[cV] < 0.0) fail("dissipation negative" + at);
        if (std::abs(r[cMass] - mass0) > 1e-11 * std::abs(mass0))
            fail("shell mass drifted" + at);
        if (std::abs(r[cSimple] - simple0) > simpleEnergyTol * std::abs(simple0))
            fail("simple energy drifted beyond tolerance" + at);
        if (!(r[cMeanT] > 0.0)) fail("mean temperature not positive" + at);
        if (r[cJensen] < -1e-9) fail("Jensen margin negative" + at);
        // E(t) = E(0) + residual - int V dt and the integral is
        // nonnegative, so E can exceed E(0) + residual only by roundoff.
        if (r[cE] - (e0 + r[cRes]) > 1e-9 * (std::abs(e0) + 1.0))
            fail("energy exceeds its entropy budget" + at);
        if (i > 0 && r[cSerrin] < prevSerrin - 1e-12)
            fail("Serrin norm decreased" + at);
        if (i > 0 && r[cVel] < prevVel - 1e-12)
            fail("velocity accumulator decreased" + at);
        prevSerrin = r[cSerrin];
        prevVel = r[cVel];
    }
    return failures;
}

}  // namespace sphflow
