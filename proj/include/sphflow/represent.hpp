#pragma once

#include "sphflow/core.hpp"

namespace sphflow {

/// Time-accumulated factors of the closed-form shell-volume
/// representation
///
///   v(t,h) = ( v0(h) + int_0^t (R/nu) B Y theta dtau ) / ( B(t,h) Y(t,h) )
///
/// with B the instantaneous factor built from the velocity integrals and
/// Y the exponential of a time integral. The ledger owns every
/// accumulator needed to evaluate B, Y and the reconstruction at a fixed
/// set of tracked mass coordinates in [anchorMass, 1], advancing once per
/// accepted step with trapezoidal time quadrature.
///
/// The normalizer integral of v over [anchorMass, 1] multiplies the
/// accumulated source term at the current time; splitting it per step
/// instead does not reproduce the identity once the anchor radius moves,
/// so the grouping here follows the derivation rather than compressing
/// everything into one time integrand.
class RepresentationLedger {
  public:
    RepresentationLedger() = default;

    /// Captures the initial-state integrals; B = Y = 1 exactly at t = 0.
    RepresentationLedger(const FluidState& initial, const MassGrid& g,
                         const PhysParams& p, double anchorMass,
                         std::size_t trackedCount = 9);

    /// Advances all accumulators past an accepted step ending at s.
    void advance(const FluidState& s, const MassGrid& g, const PhysParams& p,
                 double dt);

    /// Instantaneous factor B at the tracked nodes for the given state.
    std::vector<double> factorB(const FluidState& s, const MassGrid& g,
                                const PhysParams& p) const;

    /// Accumulated factor Y at the tracked nodes for the given state.
    std::vector<double> factorY(const FluidState& s, const MassGrid& g,
                                const PhysParams& p) const;

    struct Reconstruction {
        std::vector<double> value;     // reconstructed shell volume
        std::vector<double> residual;  // |value - v| / v per tracked node
    };

    /// Evaluates the representation against the state's shell volume.
    Reconstruction reconstruct(const FluidState& s, const MassGrid& g,
                               const PhysParams& p) const;

    double anchorMass() const { return anchor_; }
    const std::vector<double>& trackedMass() const { return tracked_; }
    double sigmaIntegral() const { return sigmaIntegral_; }
    double time() const { return time_; }

  private:
    double anchor_ = 0.25;
    std::vector<double> tracked_;

    // Initial-state caches.
    std::vector<double> initialShellVolume_;   // v0 at tracked nodes
    std::vector<double> initialUIntegral_;     // int_a^h u0/r0^2 at tracked
    double initialVolNorm_ = 0.0;              // int_a^1 v0 dh
    double initialWeightedU_ = 0.0;            // int_a^1 v0 * (int u0/r0^2)

    // Trapezoidal accumulators.
    double sigmaIntegral_ = 0.0;               // int_0^t sigma(., anchor)
    double prevSigmaAnchor_ = 0.0;
    std::vector<double> uSqIntegral_;          // int_0^t K(tau, h_k) dtau
    std::vector<double> prevK_;
    double sourceIntegral_ = 0.0;              // int_0^t (W + flux * sigmaInt)
    double prevSource_ = 0.0;
    std::vector<double> thetaWeighted_;        // int_0^t (R/nu) B Y theta
    std::vector<double> prevThetaTerm_;
    double time_ = 0.0;
};

/// sigma per cell: -R theta / v + nu (r^2 u)_h / v, the flux divergence
/// standing in for the time derivative through the continuity law.
std::vector<double> sigma_field(const FluidState& s, const MassGrid& g,
                                const PhysParams& p);

/// sigma linearly interpolated between adjacent cell centers at mass h.
double sigma_at(const FluidState& s, const MassGrid& g, const PhysParams& p,
                double h);

/// (r^2 u) at the anchor mass: the telescoped boundary flux
/// int_0^{h0} (r^2 u)_h dh.
double boundary_flux_term(const FluidState& s, const MassGrid& g,
                          double anchorMass);

}  // namespace sphflow
