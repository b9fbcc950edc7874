#include "sphflow/lagrange.hpp"

#include <algorithm>
#include <cmath>

namespace sphflow {

namespace detail {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw ValidationError("interpolant needs at least two samples");
    std::vector<double> d(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double dx = x_[k + 1] - x_[k];
        if (!(dx > 0.0)) throw ValidationError("interpolant abscissae must increase");
        d[k] = (y_[k + 1] - y_[k]) / dx;
    }
    slope_.resize(n);
    slope_.front() = d.front();
    slope_.back() = d.back();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (d[k - 1] * d[k] <= 0.0) {
            slope_[k] = 0.0;
        } else {
            // Fritsch-Carlson harmonic mean keeps the cubic monotone.
            double w1 = 2.0 * (x_[k + 1] - x_[k]) + (x_[k] - x_[k - 1]);
            double w2 = (x_[k + 1] - x_[k]) + 2.0 * (x_[k] - x_[k - 1]);
            slope_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
        }
    }
}

double MonotoneCubic::operator()(double x) const {
    if (x <= x_.front()) return y_.front() + slope_.front() * (x - x_.front());
    if (x >= x_.back()) return y_.back() + slope_.back() * (x - x_.back());
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(x_.begin(), x_.end(), x) - x_.begin() - 1);
    double h = x_[k + 1] - x_[k];
    double t = (x - x_[k]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y_[k] + h10 * h * slope_[k] + h01 * y_[k + 1] + h11 * h * slope_[k + 1];
}

}  // namespace detail

RadialProfile validate_profile(const RadialProfile& prof) {
    const std::size_t K = prof.samples();
    if (K < 2 || prof.density.size() != K || prof.velocity.size() != K ||
        prof.temperature.size() != K)
        throw ValidationError("profile arrays sized inconsistently");
    if (prof.radii.front() != 0.0)
        throw ValidationError("profile must start at r = 0");
    if (prof.velocity.front() != 0.0)
        throw ValidationError("profile velocity must vanish at r = 0");
    for (std::size_t k = 0; k < K; ++k) {
        if (!(prof.density[k] > 0.0))
            throw ValidationError("positivity violated: density sample");
        if (!(prof.temperature[k] > 0.0))
            throw ValidationError("positivity violated: temperature sample");
        if (k > 0 && !(prof.radii[k] > prof.radii[k - 1]))
            throw ValidationError("profile radii must be strictly increasing");
    }
    return prof;
}

namespace {

// Cumulative mass map per unit solid angle. The density is taken
// piecewise linear between samples and the spherical weight r^2 is
// integrated exactly, which keeps the map exact for constant and linear
// density profiles; the inverse bisects the same local model so the
// forward and inverse maps agree to solver tolerance.
struct MassMap {
    std::vector<double> radii;
    std::vector<double> rho;
    std::vector<double> cum;  // cumulative mass at the samples

    MassMap(const std::vector<double>& r, const std::vector<double>& d)
        : radii(r), rho(d) {
        cum.resize(radii.size());
        cum[0] = 0.0;
        for (std::size_t k = 0; k + 1 < radii.size(); ++k)
            cum[k + 1] = cum[k] + segment(k, radii[k + 1]);
    }

    // Mass of [radii[k], r] under the linear-density model of segment k.
    double segment(std::size_t k, double r) const {
        double r0 = radii[k], r1 = radii[k + 1];
        double slope = (rho[k + 1] - rho[k]) / (r1 - r0);
        double a = rho[k] - slope * r0;
        double c0 = r0 * r0 * r0, c1 = r * r * r;
        double q0 = c0 * r0, q1 = c1 * r;
        return a * (c1 - c0) / 3.0 + slope * (q1 - q0) / 4.0;
    }

    double total() const { return cum.back(); }

    void rescale(double factor) {
        for (auto& x : rho) x *= factor;
        for (auto& x : cum) x *= factor;
    }

    // Radius enclosing the given mass; bisection inside the bracketing
    // segment, robust because the map is strictly increasing.
    double invert(double target) const {
        if (target <= 0.0) return 0.0;
        if (target >= cum.back()) return radii.back();
        std::size_t k = static_cast<std::size_t>(
            std::upper_bound(cum.begin(), cum.end(), target) - cum.begin() - 1);
        double want = target - cum[k];
        double lo = radii[k], hi = radii[k + 1];
        for (int it = 0; it < 100; ++it) {
            double mid = 0.5 * (lo + hi);
            if (segment(k, mid) < want)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 1e-16 * (1.0 + hi)) break;
        }
        return 0.5 * (lo + hi);
    }
};

}  // namespace

FluidState to_lagrangian(const RadialProfile& profIn, const MassGrid& grid,
                         bool autoNormalize) {
    RadialProfile prof = validate_profile(profIn);
    MassMap map(prof.radii, prof.density);
    double total = map.total();
    if (!(total > 0.0)) throw ValidationError("profile carries no mass");
    if (std::abs(total - 1.0) > 1e-8 && !autoNormalize)
        throw ValidationError("mass not normalized: total mass differs from 1");
    // Total mass is fixed to 1; rescale the density model.
    map.rescale(1.0 / total);

    detail::MonotoneCubic uOfr(prof.radii, prof.velocity);
    detail::MonotoneCubic thOfr(prof.radii, prof.temperature);

    const double b = prof.radii.back();
    FluidState s;
    s.time = 0.0;
    s.shellVolume.resize(grid.cells());
    s.temperature.resize(grid.cells());
    s.velocity.resize(grid.nodes());

    // Invert the mass map at the grid nodes and define each shell volume
    // from the enclosed-volume increment. The cell mass then equals the
    // cell width exactly and radii reconstruction recovers the inverted
    // radii; the value per cell is 1/rho at the implied cell radius to
    // second order.
    std::vector<double> rNode(grid.nodes());
    rNode[0] = 0.0;
    rNode[grid.nodes() - 1] = b;
    for (std::size_t i = 1; i + 1 < grid.nodes(); ++i)
        rNode[i] = map.invert(grid.nodeCoords[i]);
    for (std::size_t j = 0; j < grid.cells(); ++j) {
        double c0 = rNode[j] * rNode[j] * rNode[j];
        double c1 = rNode[j + 1] * rNode[j + 1] * rNode[j + 1];
        s.shellVolume[j] = (c1 - c0) / (3.0 * grid.cellWidths[j]);
        double rc = std::cbrt(0.5 * (c0 + c1));
        s.temperature[j] = thOfr(rc);
    }
    s.velocity[0] = 0.0;
    for (std::size_t i = 1; i + 1 < grid.nodes(); ++i)
        s.velocity[i] = uOfr(rNode[i]);
    s.velocity[grid.nodes() - 1] = uOfr(b);
    s.radii = radii_from_volumes(s.shellVolume, grid);
    return s;
}

std::vector<double> reconstruct_radii(const FluidState& s, const MassGrid& grid) {
    return radii_from_volumes(s.shellVolume, grid);
}

RadialProfile to_eulerian(const FluidState& s, const MassGrid& grid) {
    // Interleaves node and cell-center radii so each field appears at its
    // native location: velocity at nodes, density/temperature at centers.
    // Values at the other locations are filled by second-order averages.
    const std::size_t M = grid.cells();
    RadialProfile prof;
    prof.radii.resize(2 * M + 1);
    prof.density.resize(2 * M + 1);
    prof.velocity.resize(2 * M + 1);
    prof.temperature.resize(2 * M + 1);
    std::vector<double> rc(M);
    for (std::size_t j = 0; j < M; ++j) rc[j] = cell_center_radius(s.radii, j);
    // Cell fields carried to node radii: linear interpolation in radius;
    // even extension in r^2 at the center, one-sided at the wall.
    auto atNode = [&](const std::vector<double>& q, auto value, std::size_t i) {
        if (i == 0) {
            double s0 = rc[0] * rc[0], s1 = rc[1] * rc[1];
            double t = (0.0 - s0) / (s1 - s0);
            return (1.0 - t) * value(q[0]) + t * value(q[1]);
        }
        if (i == M) {
            double t = (s.radii[M] - rc[M - 2]) / (rc[M - 1] - rc[M - 2]);
            return (1.0 - t) * value(q[M - 2]) + t * value(q[M - 1]);
        }
        double t = (s.radii[i] - rc[i - 1]) / (rc[i] - rc[i - 1]);
        return (1.0 - t) * value(q[i - 1]) + t * value(q[i]);
    };
    auto inv = [](double v) { return 1.0 / v; };
    auto idem = [](double v) { return v; };
    auto rhoAtNode = [&](std::size_t i) { return atNode(s.shellVolume, inv, i); };
    auto thAtNode = [&](std::size_t i) { return atNode(s.temperature, idem, i); };
    for (std::size_t i = 0; i <= M; ++i) {
        prof.radii[2 * i] = s.radii[i];
        prof.density[2 * i] = rhoAtNode(i);
        prof.velocity[2 * i] = s.velocity[i];
        prof.temperature[2 * i] = thAtNode(i);
    }
    for (std::size_t j = 0; j < M; ++j) {
        prof.radii[2 * j + 1] = rc[j];
        prof.density[2 * j + 1] = 1.0 / s.shellVolume[j];
        prof.velocity[2 * j + 1] = 0.5 * (s.velocity[j] + s.velocity[j + 1]);
        prof.temperature[2 * j + 1] = s.temperature[j];
    }
    return prof;
}

}  // namespace sphflow
