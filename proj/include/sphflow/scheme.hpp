#pragma once

#include <functional>
#include <optional>

#include "sphflow/core.hpp"

namespace sphflow {

/// Time stepping controls.
///
/// Diffusion terms (viscosity in momentum, conduction in temperature) are
/// advanced with implicitness weight thetaImplicit via tridiagonal solves;
/// pressure, compression and dissipative heating stay explicit. The weight
/// defaults to backward Euler; 1/2 gives the time-centered variant used by
/// the smooth verification runs.
struct SchemeConfig {
    double thetaImplicit = 1.0;   // in [1/2, 1]
    double cflSafety = 0.5;       // in (0, 1)
    double dtMin = 1e-12;
    double dtMax = 1e-3;
    double positivityFloor = 1e-9;  // step rejected below this
};

SchemeConfig validate_scheme_config(const SchemeConfig& cfg);

/// Thrown when the adaptive step estimate falls below dtMin; the caller
/// treats it as a termination signal, not a failure.
struct DtUnderflowError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a diffusion solve hits a vanishing pivot.
struct SolveError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Optional manufactured-solution sources, evaluated at (t, h).
struct StepSources {
    std::function<double(double, double)> volumeRate;       // cells
    std::function<double(double, double)> velocityRate;     // nodes
    std::function<double(double, double)> temperatureRate;  // cells
};

enum class StepReject { none, volumePositivity, temperaturePositivity };

struct StepResult {
    std::optional<FluidState> state;
    StepReject reject = StepReject::none;
    std::size_t rejectIndex = 0;

    bool ok() const { return state.has_value(); }
};

/// Rate of each shell volume, (r^2 u at right node - r^2 u at left node) / dh.
std::vector<double> continuity_rhs(const FluidState& s, const MassGrid& g);

/// Acceleration at interior nodes from the pressure gradient and the
/// viscous stress nu * (r^2 u)_h / (r^2 eta); boundary entries are zero.
std::vector<double> momentum_rhs(const FluidState& s, const MassGrid& g,
                                 const PhysParams& p);

/// Temperature rate per cell: compression work, the two quadratic
/// dissipation terms, and conduction with zero-gradient ends.
std::vector<double> temperature_rhs(const FluidState& s, const MassGrid& g,
                                    const PhysParams& p);

/// Advances one step with a midpoint predictor-corrector: a half step
/// predicts the geometry and pressure the full step is centered on.
/// Continuity and compression use the time-averaged velocity flux so
/// pressure work cancels exactly against compression in the discrete
/// energy budget, and radii are rebuilt from the updated shell volumes
/// so radius-volume consistency is preserved exactly. Positivity
/// failures reject the step instead of clamping.
StepResult step(const FluidState& s, const MassGrid& g, const PhysParams& p,
                const SchemeConfig& cfg, double dt,
                const StepSources* sources = nullptr);

/// Deterministic step estimate from the acoustic scale and the explicit
/// source magnitudes, clamped to [dtMin, dtMax]. Throws DtUnderflowError
/// when the raw estimate falls below dtMin.
double adaptive_dt(const FluidState& s, const MassGrid& g, const PhysParams& p,
                   const SchemeConfig& cfg);

namespace detail {

/// In-place Thomas elimination for a tridiagonal system; lower[0] and
/// upper[n-1] are ignored. Throws SolveError on a vanishing pivot.
void solve_tridiagonal(std::vector<double>& lower, std::vector<double>& diag,
                       std::vector<double>& upper, std::vector<double>& rhs);

/// Cell stencils shared by the step, the instantaneous rates, and the
/// dissipation functional so energy bookkeeping stays consistent.
struct CellKinematics {
    std::vector<double> flux;        // (r^2 u)_h per cell
    std::vector<double> divergence;  // flux / v per cell
    std::vector<double> shear;       // u_h / r_h per cell
    std::vector<double> uOverR;      // u / r per cell (center limit u1/r1)
};

CellKinematics cell_kinematics(const std::vector<double>& u,
                               const std::vector<double>& r,
                               const std::vector<double>& v, const MassGrid& g);

}  // namespace detail

}  // namespace sphflow
