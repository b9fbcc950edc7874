#include <cmath>

#include "json.hpp"
#include "sphflow/harness.hpp"

namespace sphflow {

// Manufactured fields: trigonometric in mass, linear ramp in time, chosen
// so every boundary compatibility condition holds identically and the
// velocity vanishes fast enough at the center that the coordinate
// degeneracy r ~ h^(1/3) does not pollute the observed order.
//
//   v = 1 + av t sin(pi h)      volume per shell
//   u = au t sin^3(pi h)        velocity
//   theta = 1 + at t cos(pi h)  temperature
//
// The radius follows from the volume, r = (3 int_0^h v)^(1/3).

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double ManufacturedSolution::volume(double t, double h) const {
    return 1.0 + volumeAmp * t * std::sin(kPi * h);
}

double ManufacturedSolution::velocity(double t, double h) const {
    double s = std::sin(kPi * h);
    return velocityAmp * t * s * s * s;
}

double ManufacturedSolution::temperature(double t, double h) const {
    return 1.0 + thetaAmp * t * std::cos(kPi * h);
}

double ManufacturedSolution::radius(double t, double h) const {
    double cum = h + volumeAmp * t * (1.0 - std::cos(kPi * h)) / kPi;
    return std::cbrt(3.0 * cum);
}

namespace {

struct Fields {
    double v, vt, vh;
    double u, ut, uh, uhh;
    double th, tht, thh, thhh;
    double r;
};

Fields eval_fields(const ManufacturedSolution& m, double t, double h) {
    double S = std::sin(kPi * h), C = std::cos(kPi * h);
    Fields f;
    f.v = 1.0 + m.volumeAmp * t * S;
    f.vt = m.volumeAmp * S;
    f.vh = m.volumeAmp * t * kPi * C;
    f.u = m.velocityAmp * t * S * S * S;
    f.ut = m.velocityAmp * S * S * S;
    f.uh = 3.0 * m.velocityAmp * t * kPi * S * S * C;
    f.uhh = 3.0 * m.velocityAmp * t * kPi * kPi * (2.0 * S * C * C - S * S * S);
    f.th = 1.0 + m.thetaAmp * t * C;
    f.tht = m.thetaAmp * C;
    f.thh = -m.thetaAmp * t * kPi * S;
    f.thhh = -m.thetaAmp * t * kPi * kPi * C;
    double cum = h + m.volumeAmp * t * (1.0 - C) / kPi;
    f.r = std::cbrt(3.0 * cum);
    return f;
}

}  // namespace

double ManufacturedSolution::continuityRhs(double t, double h) const {
    Fields f = eval_fields(*this, t, h);
    // (r^2 u)_h with r_h = v / r^2.
    return f.r * f.r * f.uh + 2.0 * f.u * f.v / f.r;
}

double ManufacturedSolution::momentumRhs(double t, double h,
                                         const PhysParams& p) const {
    Fields f = eval_fields(*this, t, h);
    double r2 = f.r * f.r;
    double pressH = f.thh / f.v - f.th * f.vh / (f.v * f.v);
    double divH = f.uhh * r2 / f.v + 4.0 * f.uh / f.r -
                  f.uh * r2 * f.vh / (f.v * f.v) -
                  2.0 * f.u * f.v / (r2 * r2);
    return r2 * (-p.gasR * pressH + p.nu() * divH);
}

double ManufacturedSolution::temperatureRhs(double t, double h,
                                            const PhysParams& p) const {
    Fields f = eval_fields(*this, t, h);
    double r2 = f.r * f.r;
    double A = f.uh * r2 / f.v + 2.0 * f.u / f.r;
    double B = f.uh * r2 / f.v;
    double C = f.u / f.r;
    double cond = 4.0 * f.r * f.thh + r2 * r2 * f.thhh / f.v -
                  r2 * r2 * f.thh * f.vh / (f.v * f.v);
    return -p.gasR * f.th * A +
           p.lambda * f.v * A * A + 2.0 * p.mu * f.v * (B * B + 2.0 * C * C) +
           p.kappa * cond;
}

double ManufacturedSolution::sigma(double t, double h, const PhysParams& p) const {
    Fields f = eval_fields(*this, t, h);
    return (-p.gasR * f.th + p.nu() * continuityRhs(t, h)) / f.v;
}

double ManufacturedSolution::volumeSource(double t, double h) const {
    Fields f = eval_fields(*this, t, h);
    return f.vt - continuityRhs(t, h);
}

double ManufacturedSolution::velocitySource(double t, double h,
                                            const PhysParams& p) const {
    Fields f = eval_fields(*this, t, h);
    return f.ut - momentumRhs(t, h, p);
}

double ManufacturedSolution::temperatureSource(double t, double h,
                                               const PhysParams& p) const {
    Fields f = eval_fields(*this, t, h);
    return f.tht - temperatureRhs(t, h, p);
}

FluidState ManufacturedSolution::state(double t, const MassGrid& g) const {
    FluidState s;
    s.time = t;
    s.shellVolume.resize(g.cells());
    s.temperature.resize(g.cells());
    s.velocity.resize(g.nodes());
    for (std::size_t j = 0; j < g.cells(); ++j) {
        double h = g.cellCenter(j);
        s.shellVolume[j] = volume(t, h);
        s.temperature[j] = temperature(t, h);
    }
    for (std::size_t i = 0; i < g.nodes(); ++i)
        s.velocity[i] = velocity(t, g.nodeCoords[i]);
    s.velocity.front() = 0.0;
    s.velocity.back() = 0.0;
    s.radii = radii_from_volumes(s.shellVolume, g);
    return s;
}

StepSources ManufacturedSolution::sources(const PhysParams& p) const {
    StepSources src;
    const ManufacturedSolution m = *this;
    src.volumeRate = [m](double t, double h) { return m.volumeSource(t, h); };
    src.velocityRate = [m, p](double t, double h) {
        return m.velocitySource(t, h, p);
    };
    src.temperatureRate = [m, p](double t, double h) {
        return m.temperatureSource(t, h, p);
    };
    return src;
}

MmsConfig mms_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    MmsConfig cfg;
    if (j.contains("grids")) cfg.grids = j.at("grids").get<std::vector<std::size_t>>();
    if (j.contains("end_time")) cfg.endTime = j.at("end_time").get<double>();
    if (j.contains("dt")) cfg.dt = j.at("dt").get<double>();
    if (j.contains("volume_amp")) cfg.volumeAmp = j.at("volume_amp").get<double>();
    if (j.contains("velocity_amp")) cfg.velocityAmp = j.at("velocity_amp").get<double>();
    if (j.contains("theta_amp")) cfg.thetaAmp = j.at("theta_amp").get<double>();
    if (j.contains("physics")) {
        const auto& p = j.at("physics");
        if (p.contains("mu")) cfg.phys.mu = p.at("mu").get<double>();
        if (p.contains("lambda")) cfg.phys.lambda = p.at("lambda").get<double>();
        if (p.contains("kappa")) cfg.phys.kappa = p.at("kappa").get<double>();
        if (p.contains("gas_r")) cfg.phys.gasR = p.at("gas_r").get<double>();
    }
    if (j.contains("scheme")) {
        const auto& s = j.at("scheme");
        if (s.contains("theta_implicit"))
            cfg.scheme.thetaImplicit = s.at("theta_implicit").get<double>();
        if (s.contains("positivity_floor"))
            cfg.scheme.positivityFloor = s.at("positivity_floor").get<double>();
    }
    return cfg;
}

std::vector<MmsRow> run_mms(const MmsConfig& cfg) {
    validate_params(cfg.phys);
    if (!(cfg.dt > 0.0) || !(cfg.endTime > 0.0))
        throw ValidationError("mms needs positive dt and end time");
    ManufacturedSolution m;
    m.volumeAmp = cfg.volumeAmp;
    m.velocityAmp = cfg.velocityAmp;
    m.thetaAmp = cfg.thetaAmp;
    StepSources src = m.sources(cfg.phys);

    std::vector<MmsRow> rows;
    for (std::size_t M : cfg.grids) {
        MassGrid g = MassGrid::uniform(M);
        FluidState s = m.state(0.0, g);
        SchemeConfig sc = cfg.scheme;
        sc.thetaImplicit = std::max(0.5, std::min(1.0, sc.thetaImplicit));
        sc.dtMax = cfg.dt;
        double t = 0.0;
        while (t < cfg.endTime - 1e-12) {
            double dt = std::min(cfg.dt, cfg.endTime - t);
            StepResult res = step(s, g, cfg.phys, sc, dt, &src);
            if (!res.ok())
                throw std::runtime_error("manufactured run rejected a step");
            s = std::move(*res.state);
            t = s.time;
        }
        MmsRow row;
        row.gridSize = M;
        for (std::size_t j = 0; j < g.cells(); ++j) {
            double h = g.cellCenter(j);
            row.errVolume = std::max(row.errVolume,
                                     std::abs(s.shellVolume[j] - m.volume(t, h)));
            row.errTemperature =
                std::max(row.errTemperature,
                         std::abs(s.temperature[j] - m.temperature(t, h)));
        }
        for (std::size_t i = 0; i < g.nodes(); ++i)
            row.errVelocity =
                std::max(row.errVelocity,
                         std::abs(s.velocity[i] - m.velocity(t, g.nodeCoords[i])));
        row.errMax =
            std::max({row.errVolume, row.errVelocity, row.errTemperature});
        if (!rows.empty()) {
            double ratio = rows.back().errMax / row.errMax;
            double refine = static_cast<double>(M) /
                            static_cast<double>(rows.back().gridSize);
            row.observedOrder = std::log(ratio) / std::log(refine);
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace sphflow
