#include <cmath>
#include <functional>

#include "doctest.h"
#include "sphflow/lagrange.hpp"

using namespace sphflow;

namespace {

// Independent oracle for the mass map of an analytic density: dense
// Simpson quadrature for h(r) plus bisection for its inverse. Kept free
// of the interpolation machinery used by the implementation.
struct MassMapOracle {
    std::function<double(double)> rho;
    double b;

    double massAt(double r) const {
        const int n = 20000;  // even
        double acc = 0.0, dr = r / n;
        for (int k = 0; k < n; k += 2) {
            double r0 = k * dr, r1 = (k + 1) * dr, r2 = (k + 2) * dr;
            acc += dr / 3.0 *
                   (rho(r0) * r0 * r0 + 4.0 * rho(r1) * r1 * r1 + rho(r2) * r2 * r2);
        }
        return acc;
    }

    double radiusAt(double h) const {
        double lo = 0.0, hi = b;
        for (int it = 0; it < 120; ++it) {
            double mid = 0.5 * (lo + hi);
            (massAt(mid) < h ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
};

RadialProfile sample_profile(const std::function<double(double)>& rho,
                             const std::function<double(double)>& u,
                             const std::function<double(double)>& th, double b,
                             std::size_t K) {
    RadialProfile prof;
    prof.radii.resize(K);
    prof.density.resize(K);
    prof.velocity.resize(K);
    prof.temperature.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
        double r = b * static_cast<double>(k) / static_cast<double>(K - 1);
        prof.radii[k] = r;
        prof.density[k] = rho(r);
        prof.velocity[k] = u(r);
        prof.temperature[k] = th(r);
    }
    prof.radii.front() = 0.0;
    prof.radii.back() = b;
    prof.velocity.front() = 0.0;
    return prof;
}

const double kB3 = std::cbrt(3.0);

}  // namespace

TEST_CASE("constant density maps to unit shell volume") {
    // rho = 1 on a ball of radius 3^(1/3): h(r) = r^3/3, v = 1.
    auto prof = sample_profile([](double) { return 1.0; },
                               [](double) { return 0.0; },
                               [](double) { return 1.0; }, kB3, 2001);
    MassGrid g = MassGrid::uniform(32);
    FluidState s = to_lagrangian(prof, g);
    for (std::size_t j = 0; j < g.cells(); ++j)
        CHECK(s.shellVolume[j] == doctest::Approx(1.0).epsilon(1e-8));
    // Total mass 1 for any accepted profile: outer radius back at b.
    CHECK(s.radii.back() == doctest::Approx(kB3).epsilon(1e-9));
}

TEST_CASE("linear density profile matches the quadrature oracle") {
    // rho(r) = r with b = 4^(1/4): h(r) = r^4/4, so r(1/4) = 1 and the
    // shell volume there is 1/rho(1) = 1.
    const double b = std::pow(4.0, 0.25);
    auto rho = [](double r) { return r < 1e-9 ? 1e-9 : r; };
    auto prof = sample_profile(rho, [](double) { return 0.0; },
                               [](double) { return 1.0; }, b, 20001);
    MassMapOracle oracle{[](double r) { return r; }, b};

    MassGrid g = MassGrid::uniform(64);
    FluidState s = to_lagrangian(prof, g);

    // Oracle value at the cell containing h = 1/4; the stored volume is a
    // cell average, second-order close to the point value 1/rho(r(h)).
    std::size_t jQuarter = 0;
    while (g.cellCenter(jQuarter + 1) < 0.25 && jQuarter + 2 < g.cells())
        ++jQuarter;
    double rOracle = oracle.radiusAt(g.cellCenter(jQuarter));
    CHECK(s.shellVolume[jQuarter] ==
          doctest::Approx(1.0 / rOracle).epsilon(2e-4));

    double rAtQuarter = oracle.radiusAt(0.25);
    CHECK(rAtQuarter == doctest::Approx(1.0).epsilon(1e-8));

    // Round trip: reconstructed node radii agree with the oracle inverse.
    auto radii = reconstruct_radii(s, g);
    for (std::size_t i = 1; i < g.nodes(); ++i) {
        double want = oracle.radiusAt(g.nodeCoords[i]);
        CHECK(radii[i] == doctest::Approx(want).epsilon(1e-8));
    }
    CHECK(radii.back() == doctest::Approx(b).epsilon(1e-8));
}

TEST_CASE("reconstruct_radii on the uniform state is arithmetic") {
    MassGrid g = MassGrid::uniform(4);
    FluidState s = equilibrium_state(g, kB3);
    auto r = reconstruct_radii(s, g);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == doctest::Approx(std::cbrt(3.0 / 4.0)).epsilon(1e-15));
    CHECK(r[2] == doctest::Approx(std::cbrt(3.0 / 2.0)).epsilon(1e-15));
    CHECK(r[3] == doctest::Approx(std::cbrt(9.0 / 4.0)).epsilon(1e-15));
    CHECK(r[4] == doctest::Approx(kB3).epsilon(1e-15));
}

TEST_CASE("to_eulerian inverts to_lagrangian on smooth profiles") {
    // Fields compared at their native locations away from the coordinate
    // degeneracy at the center, where the stored cell averages carry an
    // h^(2/3) signature instead of clean second order.
    const double b = kB3;
    auto rho = [&](double r) { return 1.0 + 0.3 * std::cos(M_PI * r / b); };
    auto u = [&](double r) { return 0.1 * std::sin(M_PI * r / b); };
    auto th = [&](double r) { return 1.0 + 0.2 * std::sin(0.5 * M_PI * r / b); };
    auto prof = sample_profile(rho, u, th, b, 20001);
    MassMapOracle oracle{rho, b};
    double total = oracle.massAt(b);

    auto maxBulkError = [&](std::size_t M) {
        MassGrid g = MassGrid::uniform(M);
        FluidState s = to_lagrangian(prof, g);
        RadialProfile back = to_eulerian(s, g);
        double e = 0.0;
        for (std::size_t j = M / 16; j < g.cells(); ++j) {
            double r = back.radii[2 * j + 1];  // cell center sample
            e = std::max(e, std::abs(back.density[2 * j + 1] - rho(r) / total));
            e = std::max(e, std::abs(back.temperature[2 * j + 1] - th(r)));
        }
        for (std::size_t i = M / 16; i <= g.cells(); ++i) {
            double r = back.radii[2 * i];  // node sample
            e = std::max(e, std::abs(back.velocity[2 * i] - u(r)));
        }
        return e;
    };

    double e512 = maxBulkError(512);
    double e1024 = maxBulkError(1024);
    CHECK(e512 <= 1e-4);
    CHECK(e512 / e1024 >= 3.0);  // second order under refinement
}

TEST_CASE("equilibrium round trip is exact to interpolation accuracy") {
    MassGrid g = MassGrid::uniform(64);
    FluidState s = equilibrium_state(g, kB3);
    RadialProfile prof = to_eulerian(s, g);
    for (std::size_t k = 0; k < prof.samples(); ++k) {
        CHECK(prof.density[k] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(prof.velocity[k] == 0.0);
        CHECK(prof.temperature[k] == doctest::Approx(1.0).epsilon(1e-14));
    }
    FluidState s2 = to_lagrangian(prof, g);
    for (std::size_t j = 0; j < g.cells(); ++j)
        CHECK(s2.shellVolume[j] == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("monotone radii for monotone shell volume") {
    MassGrid g = MassGrid::uniform(32);
    FluidState s;
    s.shellVolume.resize(g.cells());
    for (std::size_t j = 0; j < g.cells(); ++j)
        s.shellVolume[j] = 0.5 + 0.05 * static_cast<double>(j);
    auto r = radii_from_volumes(s.shellVolume, g);
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
}

TEST_CASE("unnormalized mass is rejected when auto-normalization is off") {
    auto prof = sample_profile([](double) { return 2.0; },
                               [](double) { return 0.0; },
                               [](double) { return 1.0; }, kB3, 501);
    MassGrid g = MassGrid::uniform(16);
    CHECK_THROWS_WITH_AS(to_lagrangian(prof, g, false),
                         doctest::Contains("mass not normalized"),
                         ValidationError);
    // Default path rescales the density by the total mass.
    FluidState s = to_lagrangian(prof, g);
    CHECK(s.radii.back() == doctest::Approx(kB3).epsilon(1e-9));
    CHECK(s.shellVolume[3] == doctest::Approx(1.0).epsilon(1e-9));
}
