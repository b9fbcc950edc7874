#include "sphflow/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "sphflow/scheme.hpp"

namespace sphflow {

MonitorConfig validate_monitor_config(const MonitorConfig& cfg) {
    if (!(cfg.interiorMass > 0.0) || !(cfg.interiorMass < cfg.coreMass) ||
        !(cfg.coreMass < 1.0))
        throw ValidationError("need 0 < interiorMass < coreMass < 1");
    bool sInf = std::isinf(cfg.serrinS);
    if (!sInf && 2.0 / cfg.serrinR + 3.0 / cfg.serrinS > 1.0)
        throw ValidationError("exponent constraint violated: 2/r + 3/s > 1");
    if (cfg.serrinR < 2.0)
        throw ValidationError("serrinR must be at least 2");
    if (cfg.windowStart < 0.0)
        throw ValidationError("windowStart must be nonnegative");
    return cfg;
}

double energy_functional(const FluidState& s, const MassGrid& g,
                         const PhysParams& p) {
    double e = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j) {
        double ke = 0.25 * (s.velocity[j] * s.velocity[j] +
                            s.velocity[j + 1] * s.velocity[j + 1]);
        e += (ke + p.gasR * phi_convex(s.shellVolume[j]) +
              phi_convex(s.temperature[j])) *
             g.cellWidths[j];
    }
    return e;
}

double dissipation_functional(const FluidState& s, const MassGrid& g,
                              const PhysParams& p) {
    const std::size_t M = g.cells();
    auto kin = detail::cell_kinematics(s.velocity, s.radii, s.shellVolume, g);
    // Bulk and deviatoric squares per cell. The deviator coefficient is
    // 4mu/3, which makes the decomposition algebraically equal to the
    // stress-work form lambda A^2 + 2mu (B^2 + 2C^2) when A = B + 2C.
    double total = 0.0;
    const double bulk = p.lambda + 2.0 * p.mu / 3.0;
    for (std::size_t j = 0; j < M; ++j) {
        double w = s.shellVolume[j] / s.temperature[j];
        double A = kin.divergence[j];
        double dev = kin.shear[j] - kin.uOverR[j];
        total += w * (bulk * A * A + (4.0 * p.mu / 3.0) * dev * dev) *
                 g.cellWidths[j];
    }
    // Conduction square at interior nodes, same coefficient r^4/v as the
    // scheme's flux.
    for (std::size_t i = 1; i < M; ++i) {
        double wl = g.cellWidths[i - 1], wr = g.cellWidths[i];
        double vn = (s.shellVolume[i - 1] * wr + s.shellVolume[i] * wl) / (wl + wr);
        double thn = (s.temperature[i - 1] * wr + s.temperature[i] * wl) / (wl + wr);
        double dth = (s.temperature[i] - s.temperature[i - 1]) / g.dualWidth(i);
        double r2 = s.radii[i] * s.radii[i];
        total += p.kappa * r2 * r2 * dth * dth / (vn * thn * thn) * g.dualWidth(i);
    }
    return total;
}

double simple_energy(const FluidState& s, const MassGrid& g) {
    double e = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j) {
        double ke = 0.25 * (s.velocity[j] * s.velocity[j] +
                            s.velocity[j + 1] * s.velocity[j + 1]);
        e += (ke + s.temperature[j]) * g.cellWidths[j];
    }
    return e;
}

double mean_temperature(const FluidState& s, const MassGrid& g) {
    double e = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j)
        e += s.temperature[j] * g.cellWidths[j];
    return e;
}

double mass_eta(const FluidState& s, const MassGrid& g) {
    double e = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j)
        e += s.radii[j + 1] - s.radii[j];
    return e;
}

double mass_shell(const FluidState& s, const MassGrid& g) {
    double e = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j)
        e += s.shellVolume[j] * g.cellWidths[j];
    return e;
}

double mean_temp_margin(const FluidState& s, const FluidState& initial,
                        const MassGrid& g, const PhysParams& p) {
    double lhs = std::log(mean_temperature(s, g));
    double rhs = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j)
        rhs += (std::log(initial.temperature[j]) +
                p.gasR * std::log(initial.shellVolume[j])) *
               g.cellWidths[j];
    rhs -= p.gasR * std::log(mass_shell(s, g));
    return lhs - rhs;
}

JensenMargins jensen_radius_check(const FluidState& s, const MassGrid& g) {
    const std::size_t M = g.cells();
    JensenMargins m;
    m.interior.resize(M - 1);
    m.exterior.resize(M - 1);

    // Prefix sums of mass, volume and the G-weighted volume.
    std::vector<double> vol(M + 1, 0.0), gvol(M + 1, 0.0);
    for (std::size_t j = 0; j < M; ++j) {
        double dv = s.shellVolume[j] * g.cellWidths[j];
        vol[j + 1] = vol[j] + dv;
        gvol[j + 1] = gvol[j] + g_convex(1.0 / s.shellVolume[j]) * dv;
    }
    for (std::size_t i = 1; i < M; ++i) {
        double h = g.nodeCoords[i];
        double lhsIn = g_convex(h / vol[i]);
        double rhsIn = gvol[i] / vol[i];
        m.interior[i - 1] = rhsIn - lhsIn;
        double volOut = vol[M] - vol[i];
        double lhsOut = g_convex((1.0 - h) / volOut);
        double rhsOut = (gvol[M] - gvol[i]) / volOut;
        m.exterior[i - 1] = rhsOut - lhsOut;
    }
    return m;
}

double jensen_margin_min(const FluidState& s, const MassGrid& g) {
    auto m = jensen_radius_check(s, g);
    double lo = std::numeric_limits<double>::infinity();
    for (double x : m.interior) lo = std::min(lo, x);
    for (double x : m.exterior) lo = std::min(lo, x);
    return lo;
}

double jensen_radius_floor(double h, double gBudget, double ballRadius) {
    if (!(h > 0.0)) return 0.0;
    // Admissibility G(3h/r^3) <= 3 gBudget / r^3 always holds at the
    // uniform-density radius r^3 = 3h, where the left side is G(1) = 0,
    // and always fails as r -> 0 where the mass-weighted G diverges like
    // h log(3h/r^3). Bisecting between the two gives the smallest radius
    // the budget admits.
    auto admissible = [&](double r) {
        double r3 = r * r * r;
        return g_convex(3.0 * h / r3) * r3 / 3.0 <= gBudget;
    };
    double hi = std::min(std::cbrt(3.0 * h), ballRadius);
    double lo = ballRadius * 1e-12;
    if (admissible(lo)) return lo;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (admissible(mid))
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

BlowupMonitor blowup_monitor(const FluidState& s, const MassGrid& g,
                             const MonitorConfig& cfg) {
    BlowupMonitor m;
    for (std::size_t j = 0; j < g.cells(); ++j) {
        if (j > 0 && g.nodeCoords[j + 1] > cfg.coreMass) break;
        double rho = 1.0 / s.shellVolume[j];
        m.maxRho = std::max(m.maxRho, rho);
        m.maxInvRho = std::max(m.maxInvRho, s.shellVolume[j]);
        m.maxSpeed = std::max({m.maxSpeed, std::abs(s.velocity[j]),
                               std::abs(s.velocity[j + 1])});
    }
    m.total = m.maxRho + m.maxInvRho + m.maxSpeed;
    return m;
}

SerrinAccumulator::SerrinAccumulator(const MonitorConfig& cfg, const PhysParams&)
    : cfg_(validate_monitor_config(cfg)) {}

void SerrinAccumulator::add(const FluidState& s, const MassGrid& g, double dt) {
    for (std::size_t j = 0; j < g.cells(); ++j)
        maxRho_ = std::max(maxRho_, 1.0 / s.shellVolume[j]);
    if (s.time < cfg_.windowStart) return;
    if (std::isinf(cfg_.serrinS)) {
        // Local variant: L2 in time of the core supremum of |u|.
        double sup = 0.0;
        for (std::size_t i = 0; i < g.nodes(); ++i) {
            if (i > 0 && g.nodeCoords[i] > cfg_.coreMass) break;
            sup = std::max(sup, std::abs(s.velocity[i]));
        }
        velAccum_ += sup * sup * dt;
    } else {
        // Global variant: L^r in time of the spatial L^s norm, the space
        // integral taken per unit solid angle with weight r^2 dr = v dh.
        double ls = 0.0;
        for (std::size_t j = 0; j < g.cells(); ++j) {
            double uc = 0.5 * (std::abs(s.velocity[j]) + std::abs(s.velocity[j + 1]));
            ls += std::pow(uc, cfg_.serrinS) * s.shellVolume[j] * g.cellWidths[j];
        }
        ls = std::pow(ls, 1.0 / cfg_.serrinS);
        velAccum_ += std::pow(ls, cfg_.serrinR) * dt;
    }
}

double SerrinAccumulator::velocityPart() const {
    if (std::isinf(cfg_.serrinS)) return velAccum_;  // squared norm form
    return std::pow(velAccum_, 1.0 / cfg_.serrinR);
}

InteriorMonitors::InteriorMonitors(const MonitorConfig& cfg, const PhysParams&)
    : cfg_(validate_monitor_config(cfg)) {}

void InteriorMonitors::add(const FluidState& s, const MassGrid& g, double dt,
                           double dissipationV) {
    double maxU2 = 0.0, maxV = 0.0, maxTheta = 0.0, maxUOverR2 = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j) {
        if (g.nodeCoords[j + 1] < cfg_.interiorMass) continue;
        double rho = 1.0 / s.shellVolume[j];
        minRho_ = std::min(minRho_, rho);
        maxRho_ = std::max(maxRho_, rho);
        maxV = std::max(maxV, s.shellVolume[j]);
        maxTheta = std::max(maxTheta, s.temperature[j]);
    }
    for (std::size_t i = 1; i < g.nodes(); ++i) {
        if (g.nodeCoords[i] < cfg_.interiorMass) continue;
        double u2 = s.velocity[i] * s.velocity[i];
        maxU2 = std::max(maxU2, u2);
        double ur = s.velocity[i] / s.radii[i];
        maxUOverR2 = std::max(maxUOverR2, ur * ur);
    }
    velAccum_ += maxU2 * dt;
    thetaRatio_ = std::max(thetaRatio_, maxTheta / (1.0 + maxV * dissipationV));
    if (dissipationV > 0.0)
        uOverRRatio_ = std::max(uOverRRatio_, maxUOverR2 / dissipationV);
}

EntropyBalance::EntropyBalance(const FluidState& initial, const MassGrid& g,
                               const PhysParams& p)
    : energy0_(energy_functional(initial, g, p)),
      prevV_(dissipation_functional(initial, g, p)) {}

void EntropyBalance::add(const FluidState& s, const MassGrid& g,
                         const PhysParams& p, double dt) {
    double v = dissipation_functional(s, g, p);
    dissIntegral_ += 0.5 * (prevV_ + v) * dt;
    prevV_ = v;
}

double EntropyBalance::residual(const FluidState& s, const MassGrid& g,
                                const PhysParams& p) const {
    return energy_functional(s, g, p) + dissIntegral_ - energy0_;
}

}  // namespace sphflow
