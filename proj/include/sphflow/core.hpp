#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace sphflow {

/// Thrown when a parameter set, grid, state or config violates a contract.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Physical parameters of the heat-conductive compressible flow in a ball.
///
/// The gas is ideal (P = R rho theta) with unit specific heat and the
/// spatial dimension is fixed to three; validate_params rejects anything
/// else so that untested physics cannot be configured silently.
struct PhysParams {
    double mu = 1.0;        // shear viscosity, > 0
    double lambda = 0.0;    // bulk viscosity, mu + 1.5*lambda >= 0
    double kappa = 1.0;     // heat conductivity, > 0
    double gasR = 1.0;      // gas constant, > 0
    double cV = 1.0;        // specific heat, fixed to 1
    int dim = 3;            // spatial dimension, fixed to 3
    double ballRadius = 1.4422495703074083;  // b, default 3^(1/3)

    /// Effective longitudinal viscosity 2*mu + lambda.
    double nu() const { return 2.0 * mu + lambda; }
};

/// Discretization of the mass coordinate h in [0,1].
///
/// M cells between M+1 strictly increasing node coordinates with
/// endpoints exactly 0 and 1. Velocities and radii live on nodes,
/// specific shell volume and temperature on cells.
struct MassGrid {
    std::vector<double> nodeCoords;  // size M+1
    std::vector<double> cellWidths;  // size M

    std::size_t cells() const { return cellWidths.size(); }
    std::size_t nodes() const { return nodeCoords.size(); }

    /// Width of the dual cell around interior node i.
    double dualWidth(std::size_t i) const {
        return 0.5 * (cellWidths[i - 1] + cellWidths[i]);
    }
    /// Mass coordinate of the center of cell j.
    double cellCenter(std::size_t j) const {
        return 0.5 * (nodeCoords[j] + nodeCoords[j + 1]);
    }

    static MassGrid uniform(std::size_t cellCount);
    static MassGrid fromNodes(std::vector<double> nodes);
};

/// Flow state at one instant in Lagrangian mass coordinates.
///
/// shellVolume is v = r^2 eta = 1/rho, the specific volume per shell;
/// it is the continuity variable because v_t = (r^2 u)_h is in
/// conservation form. Radii are derived from shellVolume and cached.
struct FluidState {
    double time = 0.0;
    std::vector<double> shellVolume;  // cells, > 0
    std::vector<double> velocity;     // nodes, zero at both ends
    std::vector<double> temperature;  // cells, > 0
    std::vector<double> radii;        // nodes, derived from shellVolume

    std::size_t cells() const { return shellVolume.size(); }
};

/// Node radii implied by the shell volumes: r_i^3 = 3 * sum_{j<i} v_j dh_j.
std::vector<double> radii_from_volumes(const std::vector<double>& shellVolume,
                                       const MassGrid& grid);

/// Exact midpoint radius of cell j under piecewise constant shell volume.
inline double cell_center_radius(const std::vector<double>& radii, std::size_t j) {
    double c = 0.5 * (radii[j] * radii[j] * radii[j] +
                      radii[j + 1] * radii[j + 1] * radii[j + 1]);
    return std::cbrt(c);
}

/// Uniform state v = b^3/3, u = 0, theta = 1; a stationary solution.
FluidState equilibrium_state(const MassGrid& grid, double ballRadius);

/// Functionals and monitors evaluated on one state (plus running
/// accumulators sampled at the same instant). Written as one CSV row
/// per output time by the harness.
struct FunctionalReport {
    double time = 0.0;
    double energyE = 0.0;        // entropy-type energy functional
    double dissipationV = 0.0;   // nonnegative dissipation functional
    double entropyResidual = 0.0;     // E(t) + int V dt - E(0)
    double entropyResidualRel = 0.0;  // residual / (E(0) + 1)
    double massEta = 0.0;        // integral of eta dh (= b when exact)
    double massShell = 0.0;      // integral of r^2 eta dh (= b^3/3)
    double simpleEnergy = 0.0;   // integral of (u^2/2 + theta) dh
    double meanTemp = 0.0;       // integral of theta dh
    double monitorCenter = 0.0;  // max rho + max 1/rho + max |u| on core
    double monitorMaxRho = 0.0;
    double monitorMaxInvRho = 0.0;
    double monitorMaxSpeed = 0.0;
    double serrinTotal = 0.0;    // running max rho + velocity part
    double serrinRhoPart = 0.0;
    double serrinVelPart = 0.0;
    double jensenMarginMin = 0.0;  // min over nodes, interior and exterior
    double extMinRho = 0.0;      // running min rho on [h0, 1]
    double extMaxRho = 0.0;      // running max rho on [h0, 1]
    double extVelAccum = 0.0;    // running int max_{[h0,1]} u^2 dt
    double thetaRatio = 0.0;     // max theta / (1 + max(r^2 eta) * V)
    double uOverRRatio = 0.0;    // max (u/r)^2 / V, 0 when V vanishes
    double meanTempMargin = 0.0; // slack of the mean-temperature lower bound
    double reconResidualMax = 0.0;  // representation reconstruction residual
    double sigmaIntegral = 0.0;  // accumulated sigma at the anchor
    double boundaryFlux = 0.0;   // (r^2 u) at the anchor mass
};

/// Checks the viscosity/conductivity constraints and the fixed
/// normalization (cV = 1, dim = 3). Returns p unchanged on success.
PhysParams validate_params(const PhysParams& p);

/// Checks grid monotonicity, endpoints and width consistency.
MassGrid validate_grid(const MassGrid& g);

/// Checks positivity, boundary velocities, and radius-volume consistency
/// (1e-10 relative; cube-root reconstruction amplifies roundoff near r=0).
FluidState validate_state(const FluidState& s, const MassGrid& g,
                          const PhysParams& p);

}  // namespace sphflow
