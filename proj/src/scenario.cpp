#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sphflow/harness.hpp"

namespace sphflow {

using nlohmann::json;

ScenarioConfig validate_scenario(const ScenarioConfig& cfg) {
    if (cfg.name.empty()) throw ValidationError("scenario name must not be empty");
    if (cfg.gridSize < 8) throw ValidationError("grid size must be at least 8");
    validate_params(cfg.phys);
    validate_scheme_config(cfg.scheme);
    validate_monitor_config(cfg.monitor);
    if (!(cfg.endTime > 0.0)) throw ValidationError("endTime must be positive");
    if (!(cfg.outputInterval > 0.0))
        throw ValidationError("outputInterval must be positive");
    if (!(cfg.representAnchor > 0.0) || !(cfg.representAnchor < 1.0))
        throw ValidationError("representation anchor must lie in (0, 1)");
    if (cfg.representTracked == 0)
        throw ValidationError("need at least one tracked node");
    if (!(cfg.initial.densityFloor > 0.0))
        throw ValidationError("density floor must be positive");
    return cfg;
}

namespace {

InitialDataKind kind_from_name(const std::string& s) {
    if (s == "constant") return InitialDataKind::constant;
    if (s == "gaussianBump") return InitialDataKind::gaussianBump;
    if (s == "vacuumCore") return InitialDataKind::vacuumCore;
    if (s == "shellConcentration") return InitialDataKind::shellConcentration;
    throw ValidationError("unknown initial data type: " + s);
}

const char* kind_name(InitialDataKind k) {
    switch (k) {
        case InitialDataKind::constant: return "constant";
        case InitialDataKind::gaussianBump: return "gaussianBump";
        case InitialDataKind::vacuumCore: return "vacuumCore";
        case InitialDataKind::shellConcentration: return "shellConcentration";
    }
    return "constant";
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    ScenarioConfig cfg;
    get_if(j, "name", cfg.name);
    get_if(j, "grid_size", cfg.gridSize);
    get_if(j, "end_time", cfg.endTime);
    get_if(j, "output_interval", cfg.outputInterval);
    get_if(j, "represent_anchor", cfg.representAnchor);
    get_if(j, "represent_tracked", cfg.representTracked);
    get_if(j, "seed", cfg.seed);
    if (j.contains("physics")) {
        const json& p = j.at("physics");
        get_if(p, "mu", cfg.phys.mu);
        get_if(p, "lambda", cfg.phys.lambda);
        get_if(p, "kappa", cfg.phys.kappa);
        get_if(p, "gas_r", cfg.phys.gasR);
        get_if(p, "ball_radius", cfg.phys.ballRadius);
    }
    if (j.contains("scheme")) {
        const json& s = j.at("scheme");
        get_if(s, "theta_implicit", cfg.scheme.thetaImplicit);
        get_if(s, "cfl_safety", cfg.scheme.cflSafety);
        get_if(s, "dt_min", cfg.scheme.dtMin);
        get_if(s, "dt_max", cfg.scheme.dtMax);
        get_if(s, "positivity_floor", cfg.scheme.positivityFloor);
    }
    if (j.contains("monitor")) {
        const json& m = j.at("monitor");
        get_if(m, "core_mass", cfg.monitor.coreMass);
        cfg.monitor.interiorMass = 0.5 * cfg.monitor.coreMass;
        get_if(m, "interior_mass", cfg.monitor.interiorMass);
        get_if(m, "serrin_r", cfg.monitor.serrinR);
        if (m.contains("serrin_s")) {
            if (m.at("serrin_s").is_string())
                cfg.monitor.serrinS = std::numeric_limits<double>::infinity();
            else
                cfg.monitor.serrinS = m.at("serrin_s").get<double>();
        }
        get_if(m, "window_start", cfg.monitor.windowStart);
    }
    if (j.contains("initial_data")) {
        const json& d = j.at("initial_data");
        if (d.contains("type"))
            cfg.initial.kind = kind_from_name(d.at("type").get<std::string>());
        get_if(d, "amplitude", cfg.initial.amplitude);
        get_if(d, "width", cfg.initial.width);
        get_if(d, "center", cfg.initial.center);
        get_if(d, "floor_density", cfg.initial.floorDensity);
        get_if(d, "core_radius", cfg.initial.coreRadius);
        get_if(d, "ramp_width", cfg.initial.rampWidth);
        get_if(d, "peak_density", cfg.initial.peakDensity);
        get_if(d, "shell_radius", cfg.initial.shellRadius);
        get_if(d, "velocity_amplitude", cfg.initial.velocityAmplitude);
        get_if(d, "theta_amplitude", cfg.initial.thetaAmplitude);
        get_if(d, "density_floor", cfg.initial.densityFloor);
    }
    return validate_scenario(cfg);
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["grid_size"] = cfg.gridSize;
    j["end_time"] = cfg.endTime;
    j["output_interval"] = cfg.outputInterval;
    j["represent_anchor"] = cfg.representAnchor;
    j["represent_tracked"] = cfg.representTracked;
    j["seed"] = cfg.seed;
    j["physics"] = {{"mu", cfg.phys.mu},
                    {"lambda", cfg.phys.lambda},
                    {"kappa", cfg.phys.kappa},
                    {"gas_r", cfg.phys.gasR},
                    {"ball_radius", cfg.phys.ballRadius}};
    j["scheme"] = {{"theta_implicit", cfg.scheme.thetaImplicit},
                   {"cfl_safety", cfg.scheme.cflSafety},
                   {"dt_min", cfg.scheme.dtMin},
                   {"dt_max", cfg.scheme.dtMax},
                   {"positivity_floor", cfg.scheme.positivityFloor}};
    json m = {{"core_mass", cfg.monitor.coreMass},
              {"interior_mass", cfg.monitor.interiorMass},
              {"serrin_r", cfg.monitor.serrinR},
              {"window_start", cfg.monitor.windowStart}};
    if (std::isinf(cfg.monitor.serrinS))
        m["serrin_s"] = "inf";
    else
        m["serrin_s"] = cfg.monitor.serrinS;
    j["monitor"] = m;
    j["initial_data"] = {{"type", kind_name(cfg.initial.kind)},
                         {"amplitude", cfg.initial.amplitude},
                         {"width", cfg.initial.width},
                         {"center", cfg.initial.center},
                         {"floor_density", cfg.initial.floorDensity},
                         {"core_radius", cfg.initial.coreRadius},
                         {"ramp_width", cfg.initial.rampWidth},
                         {"peak_density", cfg.initial.peakDensity},
                         {"shell_radius", cfg.initial.shellRadius},
                         {"velocity_amplitude", cfg.initial.velocityAmplitude},
                         {"theta_amplitude", cfg.initial.thetaAmplitude},
                         {"density_floor", cfg.initial.densityFloor}};
    return j.dump(2);
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return scenario_from_json(os.str());
}

RadialProfile make_profile(const InitialData& data, const PhysParams& p,
                           std::size_t samples) {
    const double b = p.ballRadius;
    auto densityShape = [&](double r) -> double {
        switch (data.kind) {
            case InitialDataKind::constant:
                return 1.0;
            case InitialDataKind::gaussianBump: {
                double x = (r - data.center * b) / (data.width * b);
                return 1.0 + data.amplitude * std::exp(-x * x);
            }
            case InitialDataKind::vacuumCore: {
                double x = (r - data.coreRadius * b) / (data.rampWidth * b);
                double s = 0.5 * (1.0 + std::tanh(x));
                return data.floorDensity + (1.0 - data.floorDensity) * s;
            }
            case InitialDataKind::shellConcentration: {
                double x = (r - data.shellRadius * b) / (data.width * b);
                return 1.0 + (data.peakDensity - 1.0) * std::exp(-x * x);
            }
        }
        return 1.0;
    };
    RadialProfile prof;
    prof.radii.resize(samples);
    prof.density.resize(samples);
    prof.velocity.resize(samples);
    prof.temperature.resize(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        double r = b * static_cast<double>(k) / static_cast<double>(samples - 1);
        prof.radii[k] = r;
        double rho = densityShape(r);
        if (!(rho >= data.densityFloor))
            throw ValidationError("initial density below configured floor");
        prof.density[k] = rho;
        // Companion fields: velocity vanishing at both ends, temperature
        // with zero gradient at both ends.
        prof.velocity[k] = data.velocityAmplitude * std::sin(M_PI * r / b);
        prof.temperature[k] =
            1.0 + data.thetaAmplitude * 0.5 * (1.0 + std::cos(M_PI * r / b));
    }
    prof.radii.front() = 0.0;
    prof.radii.back() = b;
    prof.velocity.front() = 0.0;
    prof.velocity.back() = 0.0;
    return prof;
}

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::endTimeReached: return "end time reached";
        case Termination::dtUnderflow: return "dt underflow";
        case Termination::positivityCascade: return "positivity rejection cascade";
    }
    return "end time reached";
}

}  // namespace sphflow
