#pragma once

#include "sphflow/core.hpp"

namespace sphflow {

/// Radial samples of an Eulerian profile on 0 = r_0 < ... < r_K = b.
/// Density and temperature must be positive; u(0) = 0 for any smooth
/// spherically symmetric field.
struct RadialProfile {
    std::vector<double> radii;
    std::vector<double> density;
    std::vector<double> velocity;
    std::vector<double> temperature;

    std::size_t samples() const { return radii.size(); }
};

RadialProfile validate_profile(const RadialProfile& prof);

/// Maps an Eulerian profile to a Lagrangian state through the mass
/// coordinate h(r) = int_0^r rho s^2 ds.
///
/// The cumulative mass is computed by composite trapezoid quadrature and
/// inverted by monotone cubic interpolation plus bisection. When
/// autoNormalize is set (the default) the density is rescaled so the
/// total mass h(b) is exactly 1; otherwise a total mass off by more than
/// 1e-8 is an error.
FluidState to_lagrangian(const RadialProfile& prof, const MassGrid& grid,
                         bool autoNormalize = true);

/// Node radii from the shell volumes, r_i = (3 sum_{j<i} v_j dh_j)^(1/3).
std::vector<double> reconstruct_radii(const FluidState& s, const MassGrid& grid);

/// Inverse map for output: density and temperature at cell-centered
/// radii, velocity at node radii.
RadialProfile to_eulerian(const FluidState& s, const MassGrid& grid);

namespace detail {

/// Monotone cubic (Fritsch-Carlson) interpolant over fixed samples.
/// Preserves monotonicity of the data, which makes bisection on it safe.
class MonotoneCubic {
  public:
    MonotoneCubic(std::vector<double> x, std::vector<double> y);
    double operator()(double x) const;

  private:
    std::vector<double> x_, y_, slope_;
};

}  // namespace detail

}  // namespace sphflow
