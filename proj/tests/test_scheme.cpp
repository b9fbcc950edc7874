#include <array>
#include <cmath>
#include <random>

#include "doctest.h"
#include "sphflow/diagnostics.hpp"
#include "sphflow/harness.hpp"
#include "sphflow/scheme.hpp"

using namespace sphflow;

namespace {

const double kB3 = std::cbrt(3.0);

// Smooth perturbed state used across the stepping tests; boundary
// compatible and positive.
FluidState smooth_state(const MassGrid& g) {
    FluidState s;
    s.shellVolume.resize(g.cells());
    s.temperature.resize(g.cells());
    s.velocity.resize(g.nodes());
    for (std::size_t j = 0; j < g.cells(); ++j) {
        double h = g.cellCenter(j);
        s.shellVolume[j] = 1.0 + 0.2 * std::sin(M_PI * h);
        s.temperature[j] = 1.0 + 0.1 * std::cos(M_PI * h);
    }
    for (std::size_t i = 0; i < g.nodes(); ++i) {
        double h = g.nodeCoords[i];
        double sp = std::sin(M_PI * h);
        s.velocity[i] = 0.1 * sp * sp * sp;
    }
    s.velocity.front() = 0.0;
    s.velocity.back() = 0.0;
    s.radii = radii_from_volumes(s.shellVolume, g);
    return s;
}

}  // namespace

TEST_CASE("continuity rate vanishes at rest and telescopes in general") {
    MassGrid g = MassGrid::uniform(32);
    FluidState s = equilibrium_state(g, kB3);
    auto rate = continuity_rhs(s, g);
    for (double x : rate) CHECK(x == 0.0);

    // Random interior velocities: the mass-weighted sum telescopes to the
    // boundary flux, which is zero.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> vel(-1.0, 1.0);
    for (std::size_t i = 1; i + 1 < g.nodes(); ++i) s.velocity[i] = vel(rng);
    rate = continuity_rhs(s, g);
    double sum = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j) sum += rate[j] * g.cellWidths[j];
    CHECK(std::abs(sum) <= 1e-13);
}

TEST_CASE("continuity rate of the linear field u = r is 3v exactly") {
    MassGrid g = MassGrid::uniform(16);
    FluidState s = equilibrium_state(g, kB3);
    // Ghost-adjusted: boundary values included, validity not required.
    for (std::size_t i = 0; i < g.nodes(); ++i) s.velocity[i] = s.radii[i];
    auto rate = continuity_rhs(s, g);
    // (r^2 u)_h = (r^3)_h and r^3 differences are 3 v dh by construction.
    for (std::size_t j = 0; j < g.cells(); ++j)
        CHECK(rate[j] == doctest::Approx(3.0 * s.shellVolume[j]).epsilon(1e-13));
}

TEST_CASE("momentum rate vanishes on the stationary state") {
    MassGrid g = MassGrid::uniform(32);
    PhysParams p;
    FluidState s = equilibrium_state(g, kB3);
    auto rate = momentum_rhs(s, g, p);
    for (double x : rate) CHECK(x == 0.0);
}

TEST_CASE("pressure force pushes against the density gradient") {
    MassGrid g = MassGrid::uniform(32);
    PhysParams p;
    FluidState s;
    s.shellVolume.resize(g.cells());
    s.temperature.assign(g.cells(), 1.0);
    s.velocity.assign(g.nodes(), 0.0);
    for (std::size_t j = 0; j < g.cells(); ++j)
        s.shellVolume[j] = 1.0 + 0.5 * g.cellCenter(j);  // 1/v decreasing
    s.radii = radii_from_volumes(s.shellVolume, g);
    auto rate = momentum_rhs(s, g, p);
    for (std::size_t i = 1; i + 1 < g.nodes(); ++i) {
        double gradInvV = 1.0 / s.shellVolume[i] - 1.0 / s.shellVolume[i - 1];
        CHECK(rate[i] * gradInvV < 0.0);
    }
}

TEST_CASE("discrete rates match the manufactured fields at second order") {
    ManufacturedSolution m;
    PhysParams p;
    p.lambda = 0.1;
    const double t = 0.7;

    auto errs = [&](std::size_t M) {
        MassGrid g = MassGrid::uniform(M);
        FluidState s = m.state(t, g);
        auto cRate = continuity_rhs(s, g);
        auto uRate = momentum_rhs(s, g, p);
        auto thRate = temperature_rhs(s, g, p);
        double ec = 0.0, eu = 0.0, eth = 0.0;
        for (std::size_t j = 0; j < g.cells(); ++j) {
            double h = g.cellCenter(j);
            ec = std::max(ec, std::abs(cRate[j] - m.continuityRhs(t, h)));
            // Cell rates are cell averages; at the two innermost cells the
            // conduction flux behaves like h^(4/3) and the average differs
            // from the center point value at reduced order, so the point
            // comparison starts past them.
            if (j >= 2)
                eth = std::max(eth, std::abs(thRate[j] - m.temperatureRhs(t, h, p)));
        }
        for (std::size_t i = 1; i + 1 < g.nodes(); ++i) {
            double h = g.nodeCoords[i];
            eu = std::max(eu, std::abs(uRate[i] - m.momentumRhs(t, h, p)));
        }
        return std::array<double, 3>{ec, eu, eth};
    };

    auto e1 = errs(128);
    auto e2 = errs(256);
    for (int k = 0; k < 3; ++k) {
        CAPTURE(k);
        CHECK(e1[k] / e2[k] >= 3.3);  // order about 2
    }
}

TEST_CASE("temperature rate: conduction telescopes under zero-gradient ends") {
    MassGrid g = MassGrid::uniform(48);
    PhysParams p;
    FluidState s = equilibrium_state(g, kB3);

    SUBCASE("constant temperature is stationary") {
        auto rate = temperature_rhs(s, g, p);
        for (double x : rate) CHECK(x == 0.0);
    }

    SUBCASE("pure conduction integrates to zero") {
        for (std::size_t j = 0; j < g.cells(); ++j)
            s.temperature[j] = 1.0 + 0.3 * std::cos(M_PI * g.cellCenter(j));
        auto rate = temperature_rhs(s, g, p);
        double sum = 0.0;
        bool nonzero = false;
        for (std::size_t j = 0; j < g.cells(); ++j) {
            sum += rate[j] * g.cellWidths[j];
            if (std::abs(rate[j]) > 1e-12) nonzero = true;
        }
        CHECK(nonzero);
        CHECK(std::abs(sum) <= 1e-13);
    }
}

TEST_CASE("step leaves the equilibrium untouched") {
    MassGrid g = MassGrid::uniform(64);
    PhysParams p;
    SchemeConfig cfg;
    FluidState s = equilibrium_state(g, kB3);
    StepResult res = step(s, g, p, cfg, cfg.dtMax);
    REQUIRE(res.ok());
    const FluidState& n = *res.state;
    for (std::size_t j = 0; j < g.cells(); ++j) {
        CHECK(std::abs(n.shellVolume[j] - 1.0) <= 1e-12);
        CHECK(std::abs(n.temperature[j] - 1.0) <= 1e-12);
    }
    for (double u : n.velocity) CHECK(std::abs(u) <= 1e-12);
}

TEST_CASE("step conserves shell mass to machine precision") {
    MassGrid g = MassGrid::uniform(96);
    PhysParams p;
    SchemeConfig cfg;
    FluidState s = smooth_state(g);
    double mass0 = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j)
        mass0 += s.shellVolume[j] * g.cellWidths[j];
    for (int n = 0; n < 200; ++n) {
        StepResult res = step(s, g, p, cfg, 2e-4);
        REQUIRE(res.ok());
        s = std::move(*res.state);
    }
    double mass1 = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j)
        mass1 += s.shellVolume[j] * g.cellWidths[j];
    CHECK(std::abs(mass1 - mass0) <= 1e-13 * mass0);
    CHECK(s.velocity.front() == 0.0);
    CHECK(s.velocity.back() == 0.0);
}

TEST_CASE("time-centered stepping conserves the simple energy") {
    // Pressure work cancels compression exactly in time, so the drift is
    // the spatial telescoping defect of the quadratic heating: small,
    // independent of dt, and shrinking under grid refinement.
    PhysParams p;
    SchemeConfig cfg;
    cfg.thetaImplicit = 0.5;
    auto drift = [&](std::size_t M, double dt) {
        MassGrid g = MassGrid::uniform(M);
        FluidState s = smooth_state(g);
        double e0 = simple_energy(s, g);
        int steps = static_cast<int>(std::lround(0.02 / dt));
        for (int n = 0; n < steps; ++n) {
            StepResult res = step(s, g, p, cfg, dt);
            REQUIRE(res.ok());
            s = std::move(*res.state);
        }
        return std::abs(simple_energy(s, g) - e0) / e0;
    };
    double d64 = drift(64, 2e-4);
    CHECK(d64 <= 5e-8);
    // Halving dt leaves the drift untouched; refining the grid shrinks it.
    CHECK(std::abs(drift(64, 1e-4) - d64) <= 0.05 * d64 + 1e-12);
    CHECK(d64 / drift(128, 2e-4) >= 2.0);
}

TEST_CASE("self-convergence near order two on a smooth run") {
    PhysParams p;
    SchemeConfig cfg;
    cfg.thetaImplicit = 0.5;
    const double tEnd = 0.05, dt = 1e-4;

    auto finalState = [&](std::size_t M) {
        MassGrid g = MassGrid::uniform(M);
        FluidState s = smooth_state(g);
        while (s.time < tEnd - 1e-12) {
            StepResult res = step(s, g, p, cfg, std::min(dt, tEnd - s.time));
            REQUIRE(res.ok());
            s = std::move(*res.state);
        }
        return s;
    };

    // Compare cell values of the coarse grid against the averaged fine
    // grid (cells nest under doubling). Measured away from the center
    // trench: smooth radial fields carry h^(2/3) structure at r = 0, so
    // the innermost cells converge at a reduced pointwise rate while the
    // bulk is cleanly second order.
    auto diff = [&](const FluidState& coarse, const FluidState& fine) {
        double e = 0.0;
        std::size_t skip = coarse.shellVolume.size() / 8;
        for (std::size_t j = skip; j < coarse.shellVolume.size(); ++j) {
            double vf = 0.5 * (fine.shellVolume[2 * j] + fine.shellVolume[2 * j + 1]);
            double tf = 0.5 * (fine.temperature[2 * j] + fine.temperature[2 * j + 1]);
            e = std::max(e, std::abs(coarse.shellVolume[j] - vf));
            e = std::max(e, std::abs(coarse.temperature[j] - tf));
        }
        return e;
    };

    FluidState s64 = finalState(64), s128 = finalState(128), s256 = finalState(256);
    double d1 = diff(s64, s128), d2 = diff(s128, s256);
    CHECK(d1 / d2 >= 3.0);
    CHECK(d1 / d2 <= 5.5);
}

TEST_CASE("step rejects instead of clamping when positivity fails") {
    MassGrid g = MassGrid::uniform(32);
    PhysParams p;
    SchemeConfig cfg;
    FluidState s = smooth_state(g);
    // Strong compression everywhere: huge inward flux over one giant step.
    for (std::size_t i = 1; i + 1 < g.nodes(); ++i)
        s.velocity[i] = -5.0 * s.radii[i];
    s.velocity.front() = 0.0;
    s.velocity.back() = 0.0;
    StepResult res = step(s, g, p, cfg, 1.0);
    CHECK_FALSE(res.ok());
    CHECK(res.reject == StepReject::volumePositivity);
}

TEST_CASE("adaptive step control") {
    MassGrid g = MassGrid::uniform(128);
    PhysParams p;

    SUBCASE("equilibrium is capped by dtMax") {
        SchemeConfig cfg;
        cfg.dtMax = 1e-3;
        FluidState s = equilibrium_state(g, kB3);
        CHECK(adaptive_dt(s, g, p, cfg) == cfg.dtMax);
    }

    SUBCASE("hotter gas halves the acoustic scale by sqrt(2)") {
        SchemeConfig cfg;
        cfg.dtMax = 1.0;  // leave the acoustic term binding
        FluidState s = equilibrium_state(g, kB3);
        double dt1 = adaptive_dt(s, g, p, cfg);
        for (auto& th : s.temperature) th *= 2.0;
        double dt2 = adaptive_dt(s, g, p, cfg);
        CHECK(dt2 == doctest::Approx(dt1 / std::sqrt(2.0)).epsilon(1e-12));
    }

    SUBCASE("a collapsing shell underflows the estimate") {
        SchemeConfig cfg;
        cfg.dtMin = 1e-6;
        FluidState s = equilibrium_state(g, kB3);
        // Mass concentration: one outer shell squeezed to near-zero
        // volume pins the acoustic scale there.
        s.shellVolume[100] = 1e-12;
        s.radii = radii_from_volumes(s.shellVolume, g);
        CHECK_THROWS_WITH_AS(adaptive_dt(s, g, p, cfg),
                             doctest::Contains("dt underflow"), DtUnderflowError);
    }
}

TEST_CASE("tridiagonal solver flags singular pivots") {
    std::vector<double> lo = {0.0, 1.0}, di = {1.0, 1.0}, up = {1.0, 0.0},
                        rhs = {1.0, 1.0};
    // Second pivot becomes 1 - 1*1 = 0.
    CHECK_THROWS_WITH_AS(detail::solve_tridiagonal(lo, di, up, rhs),
                         doctest::Contains("singular tridiagonal"), SolveError);

    // A well-posed system solves to machine precision.
    std::vector<double> lo2 = {0.0, -1.0, -1.0}, di2 = {2.0, 2.0, 2.0},
                        up2 = {-1.0, -1.0, 0.0}, rhs2 = {1.0, 0.0, 1.0};
    detail::solve_tridiagonal(lo2, di2, up2, rhs2);
    CHECK(rhs2[0] == doctest::Approx(1.0));
    CHECK(rhs2[1] == doctest::Approx(1.0));
    CHECK(rhs2[2] == doctest::Approx(1.0));
}
