#pragma once

#include <limits>

#include "sphflow/core.hpp"

namespace sphflow {

/// Configuration of the blowup and regularity monitors.
///
/// coreMass bounds the monitored core in mass coordinate; interiorMass
/// is the anchor of the exterior estimates, half the core by default.
/// serrinR/serrinS are the mixed space-time velocity norm exponents; an
/// infinite serrinS selects the local L2-in-time, Linf-in-space variant,
/// which is the default monitor.
struct MonitorConfig {
    double coreMass = 0.05;
    double interiorMass = 0.025;
    double serrinR = 2.0;
    double serrinS = std::numeric_limits<double>::infinity();
    double windowStart = 0.0;
};

MonitorConfig validate_monitor_config(const MonitorConfig& cfg);

/// Convex penalty x - log x - 1; zero exactly at 1.
inline double phi_convex(double x) { return x - std::log(x) - 1.0; }

/// Convex weight s log s - s + 1 of the radius bounds; G(1) = 0, G(e) = 1.
inline double g_convex(double s) { return s * std::log(s) - s + 1.0; }

/// Entropy-type energy: midpoint rule of u^2/2 + R Phi(v) + Phi(theta).
double energy_functional(const FluidState& s, const MassGrid& g,
                         const PhysParams& p);

/// Nonnegative dissipation functional: bulk, shear-deviator and
/// conduction squares with the same stencils as the scheme.
double dissipation_functional(const FluidState& s, const MassGrid& g,
                              const PhysParams& p);

/// Integral of (u^2/2 + theta) dh, conserved by the flow.
double simple_energy(const FluidState& s, const MassGrid& g);

/// Integral of theta dh.
double mean_temperature(const FluidState& s, const MassGrid& g);

/// Integral of eta dh; telescopes to the current outer radius.
double mass_eta(const FluidState& s, const MassGrid& g);

/// Integral of r^2 eta dh = sum of v dh; equals b^3/3 for a valid state.
double mass_shell(const FluidState& s, const MassGrid& g);

/// Slack of the mean-temperature lower bound
/// log int theta dh >= int (log theta0 + R log v0) dh - R log int v dh,
/// evaluated against the run's initial state.
double mean_temp_margin(const FluidState& s, const FluidState& initial,
                        const MassGrid& g, const PhysParams& p);

/// Jensen slack at one interior node: rhs - lhs of both the ball and the
/// complement inequality for the convex weight G.
struct JensenMargins {
    std::vector<double> interior;  // ball B_r(h_i)
    std::vector<double> exterior;  // complement
};

/// Margins at interior nodes; nonnegative up to roundoff for every
/// positive state because the discrete form is exactly a finite Jensen
/// inequality with weights v_j dh_j.
JensenMargins jensen_radius_check(const FluidState& s, const MassGrid& g);

/// Minimum margin over all interior nodes, both directions.
double jensen_margin_min(const FluidState& s, const MassGrid& g);

/// Smallest radius compatible with the entropy budget at mass h: solves
/// G(3h/r^3) = budget * 3/r^3 for the given G-mass budget by bisection.
/// Operational stand-in for the abstract lower bound of the radius.
double jensen_radius_floor(double h, double gBudget, double ballRadius);

struct BlowupMonitor {
    double total = 0.0;
    double maxRho = 0.0;
    double maxInvRho = 0.0;
    double maxSpeed = 0.0;
};

/// Core supremum of rho + 1/rho + |u| over cells with cumulative mass
/// at most coreMass (at least the innermost cell).
BlowupMonitor blowup_monitor(const FluidState& s, const MassGrid& g,
                             const MonitorConfig& cfg);

/// Running Serrin-type norm: max-in-time density plus the time
/// quadrature of the spatial velocity norm. Feed once per accepted step.
class SerrinAccumulator {
  public:
    SerrinAccumulator() = default;
    SerrinAccumulator(const MonitorConfig& cfg, const PhysParams& p);

    void add(const FluidState& s, const MassGrid& g, double dt);

    double rhoPart() const { return maxRho_; }
    double velocityPart() const;
    double total() const { return rhoPart() + velocityPart(); }

  private:
    MonitorConfig cfg_;
    double maxRho_ = 0.0;
    double velAccum_ = 0.0;  // int ||u||_s^r dt (or int sup_core u^2 dt)
};

/// Exterior-region monitors over h in [interiorMass, 1]: running density
/// range, the velocity-square accumulator, and the measured ratios of the
/// interior estimates. All reported as measured values, never asserted
/// against unknown constants.
class InteriorMonitors {
  public:
    InteriorMonitors() = default;
    InteriorMonitors(const MonitorConfig& cfg, const PhysParams& p);

    void add(const FluidState& s, const MassGrid& g, double dt,
             double dissipationV);

    double minRho() const { return minRho_; }
    double maxRho() const { return maxRho_; }
    double velocityAccumulator() const { return velAccum_; }
    double thetaRatio() const { return thetaRatio_; }
    double uOverRRatio() const { return uOverRRatio_; }

  private:
    MonitorConfig cfg_;
    double minRho_ = std::numeric_limits<double>::infinity();
    double maxRho_ = 0.0;
    double velAccum_ = 0.0;
    double thetaRatio_ = 0.0;
    double uOverRRatio_ = 0.0;
};

/// Running discrete energy-entropy balance E(t) + sum V dt - E(0),
/// accumulated with trapezoidal V.
class EntropyBalance {
  public:
    EntropyBalance() = default;
    EntropyBalance(const FluidState& initial, const MassGrid& g,
                   const PhysParams& p);

    /// Advances past an accepted step ending at state s.
    void add(const FluidState& s, const MassGrid& g, const PhysParams& p,
             double dt);

    double dissipationIntegral() const { return dissIntegral_; }
    double residual(const FluidState& s, const MassGrid& g,
                    const PhysParams& p) const;
    double initialEnergy() const { return energy0_; }

  private:
    double energy0_ = 0.0;
    double prevV_ = 0.0;
    double dissIntegral_ = 0.0;
};

}  // namespace sphflow
