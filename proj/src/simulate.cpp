#include <algorithm>
#include <cmath>

#include "sphflow/harness.hpp"

namespace sphflow {

namespace {

// Least-squares fit of |flux| against a + b sqrt(V) over the output
// samples; describes how tightly the boundary flux follows the
// dissipation budget on the run.
void fit_flux(const std::vector<double>& flux, const std::vector<double>& sqrtV,
              double& a, double& b) {
    const std::size_t n = flux.size();
    if (n < 2) {
        a = n ? std::abs(flux[0]) : 0.0;
        b = 0.0;
        return;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = sqrtV[i], y = std::abs(flux[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double det = n * sxx - sx * sx;
    if (std::abs(det) < 1e-300) {
        a = sy / n;
        b = 0.0;
        return;
    }
    b = (n * sxy - sx * sy) / det;
    a = (sy - b * sx) / n;
}

}  // namespace

RunOutput run_simulation(const ScenarioConfig& cfgIn) {
    ScenarioConfig cfg = validate_scenario(cfgIn);
    RunOutput out;
    out.config = cfg;
    out.grid = MassGrid::uniform(cfg.gridSize);
    const MassGrid& grid = out.grid;
    const PhysParams& phys = cfg.phys;

    RadialProfile prof = make_profile(cfg.initial, phys);
    FluidState state = to_lagrangian(prof, grid);
    validate_state(state, grid, phys);
    const FluidState initial = state;

    EntropyBalance entropy(initial, grid, phys);
    SerrinAccumulator serrin(cfg.monitor, phys);
    InteriorMonitors interior(cfg.monitor, phys);
    RepresentationLedger ledger(initial, grid, phys, cfg.representAnchor,
                                cfg.representTracked);

    RunSummary& sum = out.summary;
    sum.initialEnergy = entropy.initialEnergy();
    sum.minJensenMargin = std::numeric_limits<double>::infinity();
    sum.meanTempMarginMin = std::numeric_limits<double>::infinity();
    sum.bInf = sum.yInf = std::numeric_limits<double>::infinity();
    sum.bSup = sum.ySup = 0.0;

    const double mass0 = mass_shell(initial, grid);
    const double simple0 = simple_energy(initial, grid);

    std::vector<double> fluxSamples, sqrtVSamples;
    std::vector<double> prevLogY;
    double prevOutputTime = 0.0;

    auto emit = [&](const FluidState& s) {
        FunctionalReport r;
        r.time = s.time;
        r.energyE = energy_functional(s, grid, phys);
        r.dissipationV = dissipation_functional(s, grid, phys);
        r.entropyResidual = entropy.residual(s, grid, phys);
        r.entropyResidualRel = r.entropyResidual / (sum.initialEnergy + 1.0);
        r.massEta = mass_eta(s, grid);
        r.massShell = mass_shell(s, grid);
        r.simpleEnergy = simple_energy(s, grid);
        r.meanTemp = mean_temperature(s, grid);
        auto mon = blowup_monitor(s, grid, cfg.monitor);
        r.monitorCenter = mon.total;
        r.monitorMaxRho = mon.maxRho;
        r.monitorMaxInvRho = mon.maxInvRho;
        r.monitorMaxSpeed = mon.maxSpeed;
        r.serrinTotal = serrin.total();
        r.serrinRhoPart = serrin.rhoPart();
        r.serrinVelPart = serrin.velocityPart();
        r.jensenMarginMin = jensen_margin_min(s, grid);
        r.extMinRho = interior.minRho();
        r.extMaxRho = interior.maxRho();
        r.extVelAccum = interior.velocityAccumulator();
        r.thetaRatio = interior.thetaRatio();
        r.uOverRRatio = interior.uOverRRatio();
        r.meanTempMargin = mean_temp_margin(s, initial, grid, phys);
        auto rec = ledger.reconstruct(s, grid, phys);
        r.reconResidualMax = 0.0;
        for (double x : rec.residual) r.reconResidualMax = std::max(r.reconResidualMax, x);
        r.sigmaIntegral = ledger.sigmaIntegral();
        r.boundaryFlux = boundary_flux_term(s, grid, cfg.representAnchor);
        out.series.push_back(r);

        sum.peakMonitorTotal = std::max(sum.peakMonitorTotal, mon.total);
        sum.peakMaxRho = std::max(sum.peakMaxRho, mon.maxRho);
        sum.peakMaxInvRho = std::max(sum.peakMaxInvRho, mon.maxInvRho);
        sum.peakMaxSpeed = std::max(sum.peakMaxSpeed, mon.maxSpeed);
        sum.massDriftRel =
            std::max(sum.massDriftRel, std::abs(r.massShell - mass0) / mass0);
        sum.simpleEnergyDriftRel =
            std::max(sum.simpleEnergyDriftRel,
                     std::abs(r.simpleEnergy - simple0) / simple0);
        sum.minJensenMargin = std::min(sum.minJensenMargin, r.jensenMarginMin);
        sum.meanTempMarginMin = std::min(sum.meanTempMarginMin, r.meanTempMargin);
        sum.reconResidualMax = std::max(sum.reconResidualMax, r.reconResidualMax);
        sum.reconResidualFinal = r.reconResidualMax;
        sum.finalEntropyResidual = r.entropyResidual;
        sum.finalEntropyResidualRel = r.entropyResidualRel;
        sum.serrinTotal = r.serrinTotal;

        auto bs = ledger.factorB(s, grid, phys);
        auto ys = ledger.factorY(s, grid, phys);
        std::vector<double> logY(ys.size());
        for (std::size_t k = 0; k < bs.size(); ++k) {
            sum.bInf = std::min(sum.bInf, bs[k]);
            sum.bSup = std::max(sum.bSup, bs[k]);
            sum.yInf = std::min(sum.yInf, ys[k]);
            sum.ySup = std::max(sum.ySup, ys[k]);
            logY[k] = std::log(ys[k]);
        }
        if (!prevLogY.empty() && s.time > prevOutputTime) {
            for (std::size_t k = 0; k < logY.size(); ++k) {
                double rate = std::abs(logY[k] - prevLogY[k]) /
                              (s.time - prevOutputTime);
                sum.yLogRateMax = std::max(sum.yLogRateMax, rate);
            }
        }
        prevLogY = std::move(logY);
        prevOutputTime = s.time;

        fluxSamples.push_back(r.boundaryFlux);
        sqrtVSamples.push_back(std::sqrt(std::max(0.0, r.dissipationV)));
    };

    // Register the initial state with the running monitors, then report it.
    serrin.add(state, grid, 0.0);
    interior.add(state, grid, 0.0, dissipation_functional(state, grid, phys));
    emit(state);

    sum.termination = Termination::endTimeReached;
    std::size_t outputIndex = 1;
    const double tiny = 1e-12;
    while (state.time < cfg.endTime - tiny) {
        double dt;
        try {
            dt = adaptive_dt(state, grid, phys, cfg.scheme);
        } catch (const DtUnderflowError&) {
            sum.termination = Termination::dtUnderflow;
            break;
        }
        double tNext = std::min(cfg.endTime,
                                static_cast<double>(outputIndex) * cfg.outputInterval);
        dt = std::min(dt, tNext - state.time);
        if (dt <= 0.0) dt = tiny;

        StepResult res;
        bool cascade = false;
        for (int attempt = 0;; ++attempt) {
            res = step(state, grid, phys, cfg.scheme, dt);
            if (res.ok()) break;
            dt *= 0.5;
            ++sum.rejections;
            if (attempt >= 40 || dt < cfg.scheme.dtMin) {
                cascade = true;
                break;
            }
        }
        if (cascade) {
            sum.termination = Termination::positivityCascade;
            break;
        }

        const FluidState& next = *res.state;
        entropy.add(next, grid, phys, dt);
        serrin.add(next, grid, dt);
        interior.add(next, grid, dt, dissipation_functional(next, grid, phys));
        ledger.advance(next, grid, phys, dt);
        state = std::move(*res.state);
        ++sum.steps;

        if (state.time >= tNext - tiny) {
            emit(state);
            if (tNext >= cfg.endTime - tiny) break;
            if (state.time >= static_cast<double>(outputIndex) * cfg.outputInterval - tiny)
                ++outputIndex;
        }
    }
    // Termination snapshot for early exits; never duplicates a row.
    if (out.series.empty() || state.time > out.series.back().time + tiny)
        emit(state);

    sum.finalTime = state.time;
    fit_flux(fluxSamples, sqrtVSamples, sum.fluxFitA, sum.fluxFitB);
    // Convexity of Phi gives int G(rho) v dh = int Phi(v) dh <= E(0)/R,
    // a budget valid along the whole trajectory.
    sum.jensenRadiusFloor = jensen_radius_floor(
        cfg.monitor.coreMass, sum.initialEnergy / phys.gasR, phys.ballRadius);
    out.finalState = std::move(state);
    return out;
}

}  // namespace sphflow
