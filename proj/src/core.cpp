#include "sphflow/core.hpp"

#include <cmath>
#include <sstream>

namespace sphflow {

MassGrid MassGrid::uniform(std::size_t cellCount) {
    if (cellCount < 2) throw ValidationError("grid needs at least 2 cells");
    MassGrid g;
    g.nodeCoords.resize(cellCount + 1);
    g.cellWidths.resize(cellCount);
    for (std::size_t i = 0; i <= cellCount; ++i)
        g.nodeCoords[i] = static_cast<double>(i) / static_cast<double>(cellCount);
    g.nodeCoords.front() = 0.0;
    g.nodeCoords.back() = 1.0;
    for (std::size_t j = 0; j < cellCount; ++j)
        g.cellWidths[j] = g.nodeCoords[j + 1] - g.nodeCoords[j];
    return g;
}

MassGrid MassGrid::fromNodes(std::vector<double> nodes) {
    MassGrid g;
    g.nodeCoords = std::move(nodes);
    if (g.nodeCoords.size() < 3) throw ValidationError("grid needs at least 2 cells");
    g.cellWidths.resize(g.nodeCoords.size() - 1);
    for (std::size_t j = 0; j + 1 < g.nodeCoords.size(); ++j)
        g.cellWidths[j] = g.nodeCoords[j + 1] - g.nodeCoords[j];
    return validate_grid(g);
}

std::vector<double> radii_from_volumes(const std::vector<double>& shellVolume,
                                       const MassGrid& grid) {
    std::vector<double> r(grid.nodes());
    r[0] = 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < grid.cells(); ++j) {
        acc += shellVolume[j] * grid.cellWidths[j];
        r[j + 1] = std::cbrt(3.0 * acc);
    }
    return r;
}

FluidState equilibrium_state(const MassGrid& grid, double ballRadius) {
    FluidState s;
    double v = ballRadius * ballRadius * ballRadius / 3.0;
    s.shellVolume.assign(grid.cells(), v);
    s.velocity.assign(grid.nodes(), 0.0);
    s.temperature.assign(grid.cells(), 1.0);
    s.radii = radii_from_volumes(s.shellVolume, grid);
    return s;
}

PhysParams validate_params(const PhysParams& p) {
    if (!(p.mu > 0.0))
        throw ValidationError("viscosity constraint violated: mu must be positive");
    if (!(p.kappa > 0.0))
        throw ValidationError("conductivity constraint violated: kappa must be positive");
    if (p.mu + 0.5 * p.dim * p.lambda < 0.0)
        throw ValidationError("viscosity constraint violated: mu + (dim/2) lambda < 0");
    if (p.gasR <= 0.0)
        throw ValidationError("gas constant must be positive");
    if (p.cV != 1.0)
        throw ValidationError("cV is fixed to 1");
    if (p.dim != 3)
        throw ValidationError("dim is fixed to 3");
    if (!(p.ballRadius > 0.0))
        throw ValidationError("ball radius must be positive");
    return p;
}

MassGrid validate_grid(const MassGrid& g) {
    if (g.nodeCoords.size() < 3 || g.cellWidths.size() + 1 != g.nodeCoords.size())
        throw ValidationError("grid arrays inconsistent");
    if (g.nodeCoords.front() != 0.0 || g.nodeCoords.back() != 1.0)
        throw ValidationError("grid endpoints must be exactly 0 and 1");
    for (std::size_t j = 0; j < g.cells(); ++j) {
        if (!(g.nodeCoords[j + 1] > g.nodeCoords[j]))
            throw ValidationError("grid nodes must be strictly increasing");
        double w = g.nodeCoords[j + 1] - g.nodeCoords[j];
        if (g.cellWidths[j] != w)
            throw ValidationError("cell widths must equal node differences");
    }
    return g;
}

namespace {

std::string indexed(const char* what, std::size_t i) {
    std::ostringstream os;
    os << what << " at index " << i;
    return os.str();
}

}  // namespace

FluidState validate_state(const FluidState& s, const MassGrid& g,
                          const PhysParams& p) {
    const std::size_t M = g.cells();
    if (s.shellVolume.size() != M || s.temperature.size() != M ||
        s.velocity.size() != M + 1 || s.radii.size() != M + 1)
        throw ValidationError("state arrays sized inconsistently with grid");

    for (std::size_t j = 0; j < M; ++j) {
        if (!(s.shellVolume[j] > 0.0))
            throw ValidationError(indexed("positivity violated: shellVolume", j));
        if (!(s.temperature[j] > 0.0))
            throw ValidationError(indexed("positivity violated: temperature", j));
    }
    if (s.velocity.front() != 0.0 || s.velocity.back() != 0.0)
        throw ValidationError("boundary velocity nonzero");

    // Radius-volume consistency: 1e-10 relative, the cube-root
    // reconstruction amplifies roundoff near r = 0.
    const double tol = 1e-10;
    double acc = 0.0;
    if (s.radii[0] != 0.0) throw ValidationError("radius inconsistency: r(0) != 0");
    for (std::size_t j = 0; j < M; ++j) {
        acc += s.shellVolume[j] * g.cellWidths[j];
        double cube = s.radii[j + 1] * s.radii[j + 1] * s.radii[j + 1];
        if (std::abs(cube - 3.0 * acc) > tol * 3.0 * acc)
            throw ValidationError(indexed("radius inconsistency", j + 1));
        if (!(s.radii[j + 1] > s.radii[j]))
            throw ValidationError(indexed("radius inconsistency: not increasing", j + 1));
    }
    double b3 = p.ballRadius * p.ballRadius * p.ballRadius;
    if (std::abs(3.0 * acc - b3) > 1e-8 * b3)
        throw ValidationError("radius inconsistency: total volume differs from ball");
    return s;
}

}  // namespace sphflow
