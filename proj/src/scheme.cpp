#include "sphflow/scheme.hpp"

#include <cmath>
#include <limits>

namespace sphflow {

SchemeConfig validate_scheme_config(const SchemeConfig& cfg) {
    if (cfg.thetaImplicit < 0.5 || cfg.thetaImplicit > 1.0)
        throw ValidationError("thetaImplicit must lie in [1/2, 1]");
    if (!(cfg.cflSafety > 0.0) || cfg.cflSafety >= 1.0)
        throw ValidationError("cflSafety must lie in (0, 1)");
    if (!(cfg.dtMin > 0.0) || cfg.dtMin > cfg.dtMax)
        throw ValidationError("need 0 < dtMin <= dtMax");
    if (!(cfg.positivityFloor > 0.0))
        throw ValidationError("positivityFloor must be positive");
    return cfg;
}

namespace detail {

void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t k = 1; k < n; ++k) {
        if (diag[k - 1] == 0.0) throw SolveError("singular tridiagonal");
        double m = lower[k] / diag[k - 1];
        diag[k] -= m * upper[k - 1];
        rhs[k] -= m * rhs[k - 1];
    }
    if (diag[n - 1] == 0.0) throw SolveError("singular tridiagonal");
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
        rhs[k] = (rhs[k] - upper[k] * rhs[k + 1]) / diag[k];
    }
}

CellKinematics cell_kinematics(const std::vector<double>& u,
                               const std::vector<double>& r,
                               const std::vector<double>& v, const MassGrid& g) {
    const std::size_t M = g.cells();
    CellKinematics k;
    k.flux.resize(M);
    k.divergence.resize(M);
    k.shear.resize(M);
    k.uOverR.resize(M);
    // u/r at the center uses the limit implied by u(0) = 0; u1/r1 is
    // finite since both vanish linearly.
    auto uOverRNode = [&](std::size_t i) {
        if (i == 0) return u[1] / r[1];
        return u[i] / r[i];
    };
    for (std::size_t j = 0; j < M; ++j) {
        double gl = r[j] * r[j] * u[j];
        double gr = r[j + 1] * r[j + 1] * u[j + 1];
        k.flux[j] = (gr - gl) / g.cellWidths[j];
        k.divergence[j] = k.flux[j] / v[j];
        k.shear[j] = (u[j + 1] - u[j]) / (r[j + 1] - r[j]);
        k.uOverR[j] = 0.5 * (uOverRNode(j) + uOverRNode(j + 1));
    }
    return k;
}

}  // namespace detail

std::vector<double> continuity_rhs(const FluidState& s, const MassGrid& g) {
    const std::size_t M = g.cells();
    std::vector<double> rate(M);
    for (std::size_t j = 0; j < M; ++j) {
        double gl = s.radii[j] * s.radii[j] * s.velocity[j];
        double gr = s.radii[j + 1] * s.radii[j + 1] * s.velocity[j + 1];
        rate[j] = (gr - gl) / g.cellWidths[j];
    }
    return rate;
}

std::vector<double> momentum_rhs(const FluidState& s, const MassGrid& g,
                                 const PhysParams& p) {
    const std::size_t M = g.cells();
    const double nu = p.nu();
    auto kin = detail::cell_kinematics(s.velocity, s.radii, s.shellVolume, g);
    std::vector<double> rate(M + 1, 0.0);
    for (std::size_t i = 1; i < M; ++i) {
        double pl = p.gasR * s.temperature[i - 1] / s.shellVolume[i - 1];
        double pr = p.gasR * s.temperature[i] / s.shellVolume[i];
        double wl = nu * kin.divergence[i - 1];
        double wr = nu * kin.divergence[i];
        double r2 = s.radii[i] * s.radii[i];
        rate[i] = r2 * ((wr - wl) - (pr - pl)) / g.dualWidth(i);
    }
    return rate;
}

namespace {

// Dissipative heating per cell from the quadratic form of the
// temperature equation. The lambda part uses the same divergence as the
// viscous stress so the bulk contribution matches the momentum work.
double heating(const detail::CellKinematics& kin, const PhysParams& p,
               const std::vector<double>& v, std::size_t j) {
    double A = kin.divergence[j];
    double B = kin.shear[j];
    double C = kin.uOverR[j];
    return v[j] * (p.lambda * A * A + 2.0 * p.mu * (B * B + 2.0 * C * C));
}

// Conduction coefficient at interior node i: kappa r^4 / v with v
// interpolated from the adjacent cells. r^2/r_h equals r^4/v exactly,
// which stays well behaved at the center where r_h itself blows up.
std::vector<double> conduction_coeffs(const std::vector<double>& r,
                                      const std::vector<double>& v,
                                      const MassGrid& g, double kappa) {
    const std::size_t M = g.cells();
    std::vector<double> c(M + 1, 0.0);
    for (std::size_t i = 1; i < M; ++i) {
        double wl = g.cellWidths[i - 1], wr = g.cellWidths[i];
        double vn = (v[i - 1] * wr + v[i] * wl) / (wl + wr);
        double r2 = r[i] * r[i];
        c[i] = kappa * r2 * r2 / vn;
    }
    return c;
}

}  // namespace

std::vector<double> temperature_rhs(const FluidState& s, const MassGrid& g,
                                    const PhysParams& p) {
    const std::size_t M = g.cells();
    auto kin = detail::cell_kinematics(s.velocity, s.radii, s.shellVolume, g);
    auto cond = conduction_coeffs(s.radii, s.shellVolume, g, p.kappa);
    std::vector<double> rate(M);
    for (std::size_t j = 0; j < M; ++j) {
        double fluxL = j == 0 ? 0.0
                              : cond[j] * (s.temperature[j] - s.temperature[j - 1]) /
                                    g.dualWidth(j);
        double fluxR = j + 1 == M
                           ? 0.0
                           : cond[j + 1] *
                                 (s.temperature[j + 1] - s.temperature[j]) /
                                 g.dualWidth(j + 1);
        rate[j] = -p.gasR * s.temperature[j] * kin.divergence[j] +
                  heating(kin, p, s.shellVolume, j) +
                  (fluxR - fluxL) / g.cellWidths[j];
    }
    return rate;
}

namespace {

// One IMEX stage from `start` over dt. `base` supplies the frozen
// geometry, pressure and heating coefficients: the start state itself
// for the predictor, the predicted midpoint for the corrector. The
// stage keeps the discrete energy budget aligned: the continuity flux
// is built from the time-averaged velocity on the base geometry, and
// the temperature compression uses exactly the pressure the momentum
// update worked against, so that work and compression cancel in the
// sum of kinetic and thermal energy.
StepResult advance_stage(const FluidState& start, const FluidState& base,
                         const MassGrid& g, const PhysParams& p,
                         const SchemeConfig& cfg, double dt, double tEval,
                         const StepSources* sources) {
    const std::size_t M = g.cells();
    const double nu = p.nu();
    const double thw = cfg.thetaImplicit;
    const std::vector<double>& r = base.radii;
    const std::vector<double>& v = base.shellVolume;

    std::vector<double> r2(M + 1);
    for (std::size_t i = 0; i <= M; ++i) r2[i] = r[i] * r[i];
    std::vector<double> invVdh(M);
    for (std::size_t j = 0; j < M; ++j) invVdh[j] = 1.0 / (v[j] * g.cellWidths[j]);
    std::vector<double> press(M);
    for (std::size_t j = 0; j < M; ++j)
        press[j] = p.gasR * base.temperature[j] / v[j];

    // Momentum: explicit pressure, theta-weighted viscous stress on the
    // base geometry; unknowns are the interior node velocities.
    auto kinOld = detail::cell_kinematics(start.velocity, r, v, g);
    std::vector<double> lower(M - 1, 0.0), diag(M - 1, 0.0), upper(M - 1, 0.0),
        rhs(M - 1, 0.0);
    for (std::size_t i = 1; i < M; ++i) {
        double w = g.dualWidth(i);
        double acc = -r2[i] * (press[i] - press[i - 1]) / w;
        if (sources && sources->velocityRate)
            acc += sources->velocityRate(tEval, g.nodeCoords[i]);
        double expl = nu * (1.0 - thw) * r2[i] *
                      (kinOld.divergence[i] - kinOld.divergence[i - 1]) / w;
        double cR = dt * nu * thw * r2[i] * invVdh[i] / w;
        double cL = dt * nu * thw * r2[i] * invVdh[i - 1] / w;
        std::size_t k = i - 1;
        diag[k] = 1.0 + (cR + cL) * r2[i];
        if (k > 0) lower[k] = -cL * r2[i - 1];
        if (k + 1 < M - 1) upper[k] = -cR * r2[i + 1];
        rhs[k] = start.velocity[i] + dt * (acc + expl);
    }
    detail::solve_tridiagonal(lower, diag, upper, rhs);

    std::vector<double> uNew(M + 1, 0.0);
    for (std::size_t i = 1; i < M; ++i) uNew[i] = rhs[i - 1];

    std::vector<double> uBar(M + 1, 0.0);
    for (std::size_t i = 1; i < M; ++i)
        uBar[i] = 0.5 * (start.velocity[i] + uNew[i]);
    auto kinBar = detail::cell_kinematics(uBar, r, v, g);

    std::vector<double> vNew(M);
    for (std::size_t j = 0; j < M; ++j) {
        double rate = kinBar.flux[j];
        if (sources && sources->volumeRate)
            rate += sources->volumeRate(tEval, g.cellCenter(j));
        vNew[j] = start.shellVolume[j] + dt * rate;
        if (!(vNew[j] > cfg.positivityFloor))
            return {std::nullopt, StepReject::volumePositivity, j};
    }
    std::vector<double> rNew = radii_from_volumes(vNew, g);

    // Temperature: compression against the momentum pressure, quadratic
    // heating at the averaged velocity, theta-weighted conduction with
    // base-geometry coefficients.
    auto cond = conduction_coeffs(r, v, g, p.kappa);
    std::vector<double> src(M);
    for (std::size_t j = 0; j < M; ++j) {
        src[j] = -press[j] * kinBar.flux[j] + heating(kinBar, p, v, j);
        if (sources && sources->temperatureRate)
            src[j] += sources->temperatureRate(tEval, g.cellCenter(j));
    }

    std::vector<double> tl(M, 0.0), td(M, 0.0), tu(M, 0.0), trhs(M, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        double aL = j == 0 ? 0.0 : cond[j] / (g.dualWidth(j) * g.cellWidths[j]);
        double aR = j + 1 == M ? 0.0
                               : cond[j + 1] / (g.dualWidth(j + 1) * g.cellWidths[j]);
        td[j] = 1.0 + dt * thw * (aL + aR);
        if (j > 0) tl[j] = -dt * thw * aL;
        if (j + 1 < M) tu[j] = -dt * thw * aR;
        double explFlux =
            (j + 1 == M
                 ? 0.0
                 : cond[j + 1] * (start.temperature[j + 1] - start.temperature[j]) /
                       g.dualWidth(j + 1)) -
            (j == 0 ? 0.0
                    : cond[j] * (start.temperature[j] - start.temperature[j - 1]) /
                          g.dualWidth(j));
        trhs[j] = start.temperature[j] + dt * src[j] +
                  dt * (1.0 - thw) * explFlux / g.cellWidths[j];
    }
    detail::solve_tridiagonal(tl, td, tu, trhs);

    for (std::size_t j = 0; j < M; ++j) {
        if (!(trhs[j] > cfg.positivityFloor))
            return {std::nullopt, StepReject::temperaturePositivity, j};
    }

    FluidState out;
    out.time = start.time + dt;
    out.shellVolume = std::move(vNew);
    out.velocity = std::move(uNew);
    out.temperature = std::move(trhs);
    out.radii = std::move(rNew);
    return {std::move(out), StepReject::none, 0};
}

}  // namespace

StepResult step(const FluidState& s, const MassGrid& g, const PhysParams& p,
                const SchemeConfig& cfg, double dt, const StepSources* sources) {
    // Midpoint predictor: a half step on the current geometry supplies
    // the pressure and coefficients the full step is centered on.
    StepResult mid =
        advance_stage(s, s, g, p, cfg, 0.5 * dt, s.time + 0.25 * dt, sources);
    if (!mid.ok()) return mid;
    return advance_stage(s, *mid.state, g, p, cfg, dt, s.time + 0.5 * dt,
                         sources);
}

double adaptive_dt(const FluidState& s, const MassGrid& g, const PhysParams& p,
                   const SchemeConfig& cfg) {
    const std::size_t M = g.cells();
    auto kin = detail::cell_kinematics(s.velocity, s.radii, s.shellVolume, g);
    const double gammaR = (1.0 + p.gasR) * p.gasR;  // gamma = 1 + R/cV with cV = 1
    double est = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < M; ++j) {
        double rc = cell_center_radius(s.radii, j);
        double cs = std::sqrt(gammaR * s.temperature[j]);
        double acoustic = g.cellWidths[j] * s.shellVolume[j] / (rc * rc * cs);
        est = std::min(est, acoustic);
        double q = heating(kin, p, s.shellVolume, j);
        double srcScale = p.gasR * std::abs(kin.divergence[j]) +
                          q / s.temperature[j];
        if (srcScale > 0.0) est = std::min(est, 1.0 / srcScale);
    }
    est *= cfg.cflSafety;
    if (est < cfg.dtMin)
        throw DtUnderflowError("dt underflow: step estimate below dtMin");
    return std::min(est, cfg.dtMax);
}

}  // namespace sphflow
