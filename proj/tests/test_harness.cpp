#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sphflow/harness.hpp"

using namespace sphflow;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string temp_dir(const char* tag) {
    auto dir = std::filesystem::temp_directory_path() /
               (std::string("sphflow_test_") + tag);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

ScenarioConfig quick_bump(const char* name) {
    ScenarioConfig cfg;
    cfg.name = name;
    cfg.gridSize = 64;
    cfg.endTime = 0.05;
    cfg.outputInterval = 0.01;
    cfg.scheme.thetaImplicit = 0.5;
    cfg.scheme.dtMax = 5e-4;
    cfg.initial.kind = InitialDataKind::gaussianBump;
    cfg.initial.amplitude = 0.2;
    cfg.initial.velocityAmplitude = 0.05;
    return cfg;
}

}  // namespace

TEST_CASE("config round trips through json") {
    ScenarioConfig cfg = quick_bump("roundtrip");
    cfg.monitor.coreMass = 0.08;
    cfg.monitor.interiorMass = 0.04;
    cfg.representAnchor = 0.3;
    std::string text = scenario_to_json(cfg);
    ScenarioConfig back = scenario_from_json(text);
    CHECK(back.name == cfg.name);
    CHECK(back.gridSize == cfg.gridSize);
    CHECK(back.endTime == cfg.endTime);
    CHECK(back.scheme.thetaImplicit == cfg.scheme.thetaImplicit);
    CHECK(back.monitor.coreMass == cfg.monitor.coreMass);
    CHECK(back.initial.kind == InitialDataKind::gaussianBump);
    CHECK(back.initial.velocityAmplitude == cfg.initial.velocityAmplitude);
    CHECK(std::isinf(back.monitor.serrinS));

    CHECK_THROWS_WITH_AS(scenario_from_json("{ not json"),
                         doctest::Contains("config parse error"),
                         ValidationError);
    CHECK_THROWS_AS(scenario_from_json("{\"grid_size\": 2}"), ValidationError);
}

TEST_CASE("constant scenario holds still and counts its rows") {
    ScenarioConfig cfg;
    cfg.name = "const_unit";
    cfg.gridSize = 32;
    cfg.endTime = 0.05;
    cfg.outputInterval = 0.01;
    RunOutput out = run_simulation(cfg);
    CHECK(out.summary.termination == Termination::endTimeReached);
    CHECK(out.series.size() == 6);  // floor(end/interval) + 1
    for (const auto& r : out.series) {
        CHECK(std::abs(r.energyE) <= 1e-12);
        CHECK(std::abs(r.simpleEnergy - out.series.front().simpleEnergy) <= 1e-12);
        CHECK(r.monitorCenter == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(r.reconResidualMax <= 1e-10);
    }
    CHECK(out.summary.massDriftRel <= 1e-13);
    for (std::size_t i = 1; i < out.series.size(); ++i)
        CHECK(out.series[i].time > out.series[i - 1].time);

    // Zero entropy budget pins the admissible core radius at the
    // uniform-density value, which the actual flow sits exactly on.
    CHECK(out.summary.jensenRadiusFloor ==
          doctest::Approx(std::cbrt(3.0 * cfg.monitor.coreMass)).epsilon(1e-3));
}

TEST_CASE("identical configs give byte-identical outputs") {
    std::string dirA = temp_dir("det_a"), dirB = temp_dir("det_b");
    ScenarioConfig cfg = quick_bump("det");
    RunOutput a = run_simulation(cfg);
    RunOutput b = run_simulation(cfg);
    std::string pa = write_outputs(a, dirA), pb = write_outputs(b, dirB);
    CHECK(slurp(pa) == slurp(pb));
    CHECK(slurp(dirA + "/det_summary.json") == slurp(dirB + "/det_summary.json"));
}

TEST_CASE("cavitating core drives the monitor up while the exterior stays tame") {
    // Weakly dissipative gas with a strong outward push: the resolved
    // core keeps rarefying well past its initial reading before the
    // ambient pressure implodes the bubble.
    ScenarioConfig cfg;
    cfg.name = "vac_unit";
    cfg.gridSize = 128;
    cfg.endTime = 0.2;
    cfg.outputInterval = 0.05;
    cfg.phys.mu = 0.02;
    cfg.phys.kappa = 0.2;
    cfg.initial.kind = InitialDataKind::vacuumCore;
    cfg.initial.floorDensity = 0.05;
    cfg.initial.coreRadius = 0.55;
    cfg.initial.rampWidth = 0.08;
    cfg.initial.velocityAmplitude = 1.5;
    RunOutput out = run_simulation(cfg);
    CHECK(out.summary.peakMaxInvRho > 20.0);
    CHECK(out.summary.peakMaxInvRho >
          1.3 * out.series.front().monitorMaxInvRho);  // genuinely driven
    CHECK(std::isfinite(out.series.back().extMaxRho));
    CHECK(out.series.back().extMinRho > 0.0);
}

TEST_CASE("summary json reproduces the recorded peak exactly") {
    std::string dir = temp_dir("summary");
    ScenarioConfig cfg = quick_bump("peek");
    RunOutput out = run_simulation(cfg);
    write_outputs(out, dir);
    std::string text = slurp(dir + "/peek_summary.json");
    // Round-trippable formatting: the parsed value equals the recorded one.
    auto pos = text.find("\"peak_monitor_total\":");
    REQUIRE(pos != std::string::npos);
    double parsed = std::strtod(text.c_str() + pos + 21, nullptr);
    CHECK(parsed == out.summary.peakMonitorTotal);
}

TEST_CASE("series check accepts good files and flags corrupted ones") {
    std::string dir = temp_dir("check");
    ScenarioConfig cfg = quick_bump("chk");
    RunOutput out = run_simulation(cfg);
    std::string series = write_outputs(out, dir);
    CHECK(check_series(series).empty());

    // Corrupt the dissipation column of the last row.
    std::string text = slurp(series);
    auto lastLine = text.rfind('\n', text.size() - 2);
    std::string head = text.substr(0, lastLine + 1);
    std::string row = text.substr(lastLine + 1);
    auto firstComma = row.find(',');
    auto secondComma = row.find(',', firstComma + 1);
    auto thirdComma = row.find(',', secondComma + 1);
    row.replace(secondComma + 1, thirdComma - secondComma - 1, "-1");
    std::ofstream(series) << head << row;
    auto failures = check_series(series);
    REQUIRE_FALSE(failures.empty());
    CHECK(failures.front().find("dissipation") != std::string::npos);
}

TEST_CASE("manufactured run with zero amplitudes is exact") {
    MmsConfig cfg;
    cfg.grids = {32};
    cfg.endTime = 0.01;
    cfg.dt = 1e-4;
    cfg.volumeAmp = 0.0;
    cfg.velocityAmp = 0.0;
    cfg.thetaAmp = 0.0;
    auto rows = run_mms(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].errMax <= 1e-13);
}

TEST_CASE("manufactured run converges on a coarse pair") {
    MmsConfig cfg;
    cfg.grids = {32, 64};
    cfg.endTime = 0.05;
    cfg.dt = 5e-5;
    cfg.scheme.thetaImplicit = 0.5;
    auto rows = run_mms(cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].observedOrder >= 1.5);
}

TEST_CASE("sweep expands the grid and honors the cap") {
    SweepConfig cfg;
    cfg.base = quick_bump("swp");
    cfg.base.gridSize = 32;
    cfg.base.endTime = 0.02;
    cfg.axes.push_back({"initial_data.velocity_amplitude", {0.02, 0.05}});
    cfg.axes.push_back({"physics.kappa", {0.5, 1.0}});
    auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 4);
    for (const auto& r : rows) {
        CHECK_FALSE(r.failed);
        CHECK(r.summary.termination == Termination::endTimeReached);
    }

    SUBCASE("single point equals a plain run") {
        SweepConfig one;
        one.base = quick_bump("swp_one");
        one.base.endTime = 0.02;
        one.axes.push_back({"initial_data.velocity_amplitude", {0.05}});
        auto rowsOne = run_sweep(one);
        REQUIRE(rowsOne.size() == 1);
        ScenarioConfig direct = one.base;
        direct.name = rowsOne[0].name;
        RunOutput ref = run_simulation(direct);
        CHECK(rowsOne[0].summary.peakMonitorTotal ==
              ref.summary.peakMonitorTotal);
        CHECK(rowsOne[0].summary.finalEntropyResidual ==
              ref.summary.finalEntropyResidual);
    }

    SUBCASE("job cap rejects before running") {
        cfg.maxJobs = 3;
        CHECK_THROWS_WITH_AS(run_sweep(cfg), doctest::Contains("job cap"),
                             ValidationError);
    }

    SUBCASE("unknown axis fails the sweep up front") {
        cfg.axes.push_back({"physics.nope", {1.0}});
        CHECK_THROWS_AS(run_sweep(cfg), ValidationError);
    }
}

TEST_CASE("deeper floors cavitate harder across a sweep") {
    SweepConfig cfg;
    cfg.base.name = "floor_order";
    cfg.base.gridSize = 96;
    cfg.base.endTime = 0.15;
    cfg.base.outputInterval = 0.05;
    cfg.base.phys.mu = 0.02;
    cfg.base.phys.kappa = 0.2;
    cfg.base.initial.kind = InitialDataKind::vacuumCore;
    cfg.base.initial.velocityAmplitude = 1.5;
    cfg.base.initial.densityFloor = 1e-3;
    cfg.axes.push_back({"initial_data.floor_density", {0.5, 0.2, 0.1, 0.05}});
    auto rows = run_sweep(cfg);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE_FALSE(rows[i].failed);
        CHECK(rows[i].summary.peakMaxInvRho >=
              rows[i - 1].summary.peakMaxInvRho);
    }
}

TEST_CASE("initial profiles respect the configured density floor") {
    InitialData d;
    d.kind = InitialDataKind::vacuumCore;
    d.floorDensity = 0.05;
    PhysParams p;
    RadialProfile prof = make_profile(d, p, 513);
    for (double rho : prof.density) CHECK(rho >= d.densityFloor);

    d.densityFloor = 0.2;  // above the configured core floor
    CHECK_THROWS_WITH_AS(make_profile(d, p, 513),
                         doctest::Contains("density below configured floor"),
                         ValidationError);
}
