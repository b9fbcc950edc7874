#include "sphflow/represent.hpp"

#include <algorithm>
#include <cmath>

#include "sphflow/scheme.hpp"

namespace sphflow {

namespace {

// Linear interpolation of a node quantity at mass h.
double node_interp(const std::vector<double>& w, const MassGrid& g, double h) {
    const auto& x = g.nodeCoords;
    if (h <= x.front()) return w.front();
    if (h >= x.back()) return w.back();
    std::size_t j = static_cast<std::size_t>(
        std::upper_bound(x.begin(), x.end(), h) - x.begin() - 1);
    double t = (h - x[j]) / (x[j + 1] - x[j]);
    return (1.0 - t) * w[j] + t * w[j + 1];
}

// Linear interpolation of a cell quantity between adjacent cell centers.
double cell_interp(const std::vector<double>& q, const MassGrid& g, double h) {
    const std::size_t M = g.cells();
    if (h <= g.cellCenter(0)) return q.front();
    if (h >= g.cellCenter(M - 1)) return q.back();
    std::size_t j = 0;
    while (j + 1 < M && g.cellCenter(j + 1) < h) ++j;
    double c0 = g.cellCenter(j), c1 = g.cellCenter(j + 1);
    double t = (h - c0) / (c1 - c0);
    return (1.0 - t) * q[j] + t * q[j + 1];
}

// Trapezoidal antiderivative of a node function, evaluated at mass h.
// Differences of this give integrals between arbitrary masses. Owns its
// samples so callers may hand it temporaries.
struct NodeAntiderivative {
    std::vector<double> atNode;
    const MassGrid* grid;
    std::vector<double> values;

    NodeAntiderivative(std::vector<double> w, const MassGrid& g)
        : grid(&g), values(std::move(w)) {
        atNode.resize(g.nodes());
        atNode[0] = 0.0;
        for (std::size_t j = 0; j < g.cells(); ++j)
            atNode[j + 1] =
                atNode[j] + 0.5 * (values[j] + values[j + 1]) * g.cellWidths[j];
    }

    double operator()(double h) const {
        const auto& x = grid->nodeCoords;
        if (h <= x.front()) return atNode.front();
        if (h >= x.back()) return atNode.back();
        std::size_t j = static_cast<std::size_t>(
            std::upper_bound(x.begin(), x.end(), h) - x.begin() - 1);
        double wh = node_interp(values, *grid, h);
        return atNode[j] + 0.5 * (values[j] + wh) * (h - x[j]);
    }
};

// u / r^2 at nodes; the center entry is never integrated over (every
// integral starts at the anchor) but must stay finite.
std::vector<double> u_over_r2(const FluidState& s) {
    std::vector<double> w(s.velocity.size(), 0.0);
    for (std::size_t i = 1; i < w.size(); ++i)
        w[i] = s.velocity[i] / (s.radii[i] * s.radii[i]);
    return w;
}

// 2 u^2 / r^3 at nodes.
std::vector<double> usq_over_r3(const FluidState& s) {
    std::vector<double> w(s.velocity.size(), 0.0);
    for (std::size_t i = 1; i < w.size(); ++i)
        w[i] = 2.0 * s.velocity[i] * s.velocity[i] /
               (s.radii[i] * s.radii[i] * s.radii[i]);
    return w;
}

// Integral of a cell quantity over [a, 1].
double cell_integral_from(const std::vector<double>& q, const MassGrid& g,
                          double a) {
    double acc = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j) {
        double lo = std::max(g.nodeCoords[j], a);
        double hi = g.nodeCoords[j + 1];
        if (hi > lo) acc += q[j] * (hi - lo);
    }
    return acc;
}

// Integral over [a, 1] of cellQ times the running integral from a of the
// node function behind anti.
double mixed_integral_from(const std::vector<double>& cellQ,
                           const NodeAntiderivative& anti, const MassGrid& g,
                           double a) {
    double base = anti(a);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.cells(); ++j) {
        double lo = std::max(g.nodeCoords[j], a);
        double hi = g.nodeCoords[j + 1];
        if (!(hi > lo)) continue;
        double kl = (g.nodeCoords[j] >= a) ? anti.atNode[j] - base : 0.0;
        double kr = anti.atNode[j + 1] - base;
        acc += cellQ[j] * 0.5 * (kl + kr) * (hi - lo);
    }
    return acc;
}

// Integral of a node function over [a, 1].
double node_integral_from(const std::vector<double>& w, const MassGrid& g,
                          double a) {
    NodeAntiderivative anti(w, g);
    return anti(1.0) - anti(a);
}

// One-step quadrature of a positive exponential-type integrand: the
// logarithmic mean of the endpoint values integrates exp(linear) exactly
// and is second order in general, so the accumulated theta term keeps up
// with the exponential growth of the factors at any step size.
double log_mean_step(double f0, double f1, double dt) {
    if (!(f0 > 0.0) || !(f1 > 0.0)) return 0.5 * (f0 + f1) * dt;
    double d = std::log(f1) - std::log(f0);
    if (std::abs(d) < 1e-8) return 0.5 * (f0 + f1) * dt;
    return (f1 - f0) / d * dt;
}

}  // namespace

std::vector<double> sigma_field(const FluidState& s, const MassGrid& g,
                                const PhysParams& p) {
    auto rate = continuity_rhs(s, g);
    std::vector<double> sig(g.cells());
    for (std::size_t j = 0; j < g.cells(); ++j)
        sig[j] = (-p.gasR * s.temperature[j] + p.nu() * rate[j]) /
                 s.shellVolume[j];
    return sig;
}

double sigma_at(const FluidState& s, const MassGrid& g, const PhysParams& p,
                double h) {
    return cell_interp(sigma_field(s, g, p), g, h);
}

double boundary_flux_term(const FluidState& s, const MassGrid& g,
                          double anchorMass) {
    std::vector<double> r2u(s.velocity.size());
    for (std::size_t i = 0; i < r2u.size(); ++i)
        r2u[i] = s.radii[i] * s.radii[i] * s.velocity[i];
    return node_interp(r2u, g, anchorMass);
}

RepresentationLedger::RepresentationLedger(const FluidState& initial,
                                           const MassGrid& g,
                                           const PhysParams& p,
                                           double anchorMass,
                                           std::size_t trackedCount)
    : anchor_(anchorMass) {
    if (!(anchorMass > 0.0) || !(anchorMass < 1.0))
        throw ValidationError("anchor mass must lie in (0, 1)");
    if (trackedCount == 0)
        throw ValidationError("need at least one tracked node");

    // Tracked nodes uniformly spaced, strictly inside [anchor, 1].
    tracked_.resize(trackedCount);
    double span = 1.0 - anchor_;
    for (std::size_t k = 0; k < trackedCount; ++k)
        tracked_[k] = anchor_ + (static_cast<double>(k) + 0.5) * span /
                                    static_cast<double>(trackedCount);

    NodeAntiderivative antiU(u_over_r2(initial), g);
    double base = antiU(anchor_);
    initialShellVolume_.resize(trackedCount);
    initialUIntegral_.resize(trackedCount);
    for (std::size_t k = 0; k < trackedCount; ++k) {
        initialShellVolume_[k] = cell_interp(initial.shellVolume, g, tracked_[k]);
        initialUIntegral_[k] = antiU(tracked_[k]) - base;
    }
    initialVolNorm_ = cell_integral_from(initial.shellVolume, g, anchor_);
    initialWeightedU_ =
        mixed_integral_from(initial.shellVolume, antiU, g, anchor_);

    prevSigmaAnchor_ = sigma_at(initial, g, p, anchor_);
    NodeAntiderivative antiK(usq_over_r3(initial), g);
    double baseK = antiK(anchor_);
    uSqIntegral_.assign(trackedCount, 0.0);
    prevK_.resize(trackedCount);
    for (std::size_t k = 0; k < trackedCount; ++k)
        prevK_[k] = antiK(tracked_[k]) - baseK;

    // W(0) + flux * (empty sigma integral).
    std::vector<double> usq(initial.velocity.size());
    for (std::size_t i = 0; i < usq.size(); ++i)
        usq[i] = initial.velocity[i] * initial.velocity[i];
    double w = node_integral_from(usq, g, anchor_) +
               p.gasR * cell_integral_from(initial.temperature, g, anchor_) +
               mixed_integral_from(initial.shellVolume, antiK, g, anchor_);
    prevSource_ = w;

    thetaWeighted_.assign(trackedCount, 0.0);
    prevThetaTerm_.resize(trackedCount);
    for (std::size_t k = 0; k < trackedCount; ++k)
        prevThetaTerm_[k] = (p.gasR / p.nu()) *
                            cell_interp(initial.temperature, g, tracked_[k]);
    time_ = initial.time;
}

void RepresentationLedger::advance(const FluidState& s, const MassGrid& g,
                                   const PhysParams& p, double dt) {
    double sig = sigma_at(s, g, p, anchor_);
    sigmaIntegral_ += 0.5 * (prevSigmaAnchor_ + sig) * dt;
    prevSigmaAnchor_ = sig;

    NodeAntiderivative antiK(usq_over_r3(s), g);
    double baseK = antiK(anchor_);
    for (std::size_t k = 0; k < tracked_.size(); ++k) {
        double kNow = antiK(tracked_[k]) - baseK;
        uSqIntegral_[k] += 0.5 * (prevK_[k] + kNow) * dt;
        prevK_[k] = kNow;
    }

    std::vector<double> usq(s.velocity.size());
    for (std::size_t i = 0; i < usq.size(); ++i)
        usq[i] = s.velocity[i] * s.velocity[i];
    double w = node_integral_from(usq, g, anchor_) +
               p.gasR * cell_integral_from(s.temperature, g, anchor_) +
               mixed_integral_from(s.shellVolume, antiK, g, anchor_);
    double source = w + boundary_flux_term(s, g, anchor_) * sigmaIntegral_;
    sourceIntegral_ += 0.5 * (prevSource_ + source) * dt;
    prevSource_ = source;

    auto b = factorB(s, g, p);
    auto y = factorY(s, g, p);
    for (std::size_t k = 0; k < tracked_.size(); ++k) {
        double term = (p.gasR / p.nu()) * b[k] * y[k] *
                      cell_interp(s.temperature, g, tracked_[k]);
        thetaWeighted_[k] += log_mean_step(prevThetaTerm_[k], term, dt);
        prevThetaTerm_[k] = term;
    }
    time_ = s.time;
}

std::vector<double> RepresentationLedger::factorB(const FluidState& s,
                                                  const MassGrid& g,
                                                  const PhysParams& p) const {
    NodeAntiderivative antiU(u_over_r2(s), g);
    double base = antiU(anchor_);
    double volNorm = cell_integral_from(s.shellVolume, g, anchor_);
    if (!(volNorm > 1e-300))
        throw ValidationError("anchor too close to boundary: normalizer underflow");
    double weightedU = mixed_integral_from(s.shellVolume, antiU, g, anchor_);
    double bracket = initialWeightedU_ - weightedU +
                     p.nu() * (volNorm - initialVolNorm_);
    std::vector<double> out(tracked_.size());
    for (std::size_t k = 0; k < tracked_.size(); ++k) {
        double ui = antiU(tracked_[k]) - base;
        out[k] = std::exp((initialUIntegral_[k] - ui - bracket / volNorm) /
                          p.nu());
    }
    return out;
}

std::vector<double> RepresentationLedger::factorY(const FluidState& s,
                                                  const MassGrid& g,
                                                  const PhysParams& p) const {
    double volNorm = cell_integral_from(s.shellVolume, g, anchor_);
    if (!(volNorm > 1e-300))
        throw ValidationError("anchor too close to boundary: normalizer underflow");
    std::vector<double> out(tracked_.size());
    for (std::size_t k = 0; k < tracked_.size(); ++k)
        out[k] = std::exp((-uSqIntegral_[k] + sourceIntegral_ / volNorm) /
                          p.nu());
    return out;
}

RepresentationLedger::Reconstruction RepresentationLedger::reconstruct(
    const FluidState& s, const MassGrid& g, const PhysParams& p) const {
    auto b = factorB(s, g, p);
    auto y = factorY(s, g, p);
    Reconstruction rec;
    rec.value.resize(tracked_.size());
    rec.residual.resize(tracked_.size());
    for (std::size_t k = 0; k < tracked_.size(); ++k) {
        rec.value[k] =
            (initialShellVolume_[k] + thetaWeighted_[k]) / (b[k] * y[k]);
        double v = cell_interp(s.shellVolume, g, tracked_[k]);
        rec.residual[k] = std::abs(rec.value[k] - v) / v;
    }
    return rec;
}

}  // namespace sphflow
