#include <atomic>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "sphflow/harness.hpp"

namespace sphflow {

using nlohmann::json;

SweepConfig sweep_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    SweepConfig cfg;
    if (!j.contains("base")) throw ValidationError("sweep config needs a base run");
    cfg.base = scenario_from_json(j.at("base").dump());
    if (j.contains("max_jobs")) cfg.maxJobs = j.at("max_jobs").get<std::size_t>();
    if (j.contains("axes")) {
        for (const auto& a : j.at("axes")) {
            SweepAxis ax;
            ax.path = a.at("path").get<std::string>();
            ax.values = a.at("values").get<std::vector<double>>();
            if (ax.values.empty())
                throw ValidationError("sweep axis has no values: " + ax.path);
            cfg.axes.push_back(std::move(ax));
        }
    }
    return cfg;
}

namespace {

// Applies one override through the JSON form of the config so axis paths
// follow the config file nesting, e.g. "initial_data.floor_density".
ScenarioConfig apply_override(const ScenarioConfig& base, const std::string& path,
                              double value) {
    json j = json::parse(scenario_to_json(base));
    json* node = &j;
    std::string rest = path;
    for (;;) {
        auto dot = rest.find('.');
        std::string key = rest.substr(0, dot);
        if (dot == std::string::npos) {
            if (!node->contains(key))
                throw ValidationError("unknown sweep axis path: " + path);
            // Integral fields keep their type.
            if ((*node)[key].is_number_integer())
                (*node)[key] = static_cast<std::int64_t>(value);
            else
                (*node)[key] = value;
            break;
        }
        if (!node->contains(key))
            throw ValidationError("unknown sweep axis path: " + path);
        node = &(*node)[key];
        rest = rest.substr(dot + 1);
    }
    return scenario_from_json(j.dump());
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    validate_scenario(cfg.base);
    std::size_t total = 1;
    for (const auto& ax : cfg.axes) {
        total *= ax.values.size();
        if (total > cfg.maxJobs)
            throw ValidationError("sweep exceeds job cap");
    }

    // Materialize every run config up front; any bad axis fails the whole
    // sweep before a single run starts.
    std::vector<SweepRow> rows(total);
    std::vector<ScenarioConfig> configs(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        ScenarioConfig run = cfg.base;
        std::size_t rem = idx;
        SweepRow& row = rows[idx];
        std::ostringstream name;
        name << cfg.base.name << "_" << idx;
        for (const auto& ax : cfg.axes) {
            double v = ax.values[rem % ax.values.size()];
            rem /= ax.values.size();
            run = apply_override(run, ax.path, v);
            row.axisValues.push_back(v);
        }
        run.name = name.str();
        row.name = run.name;
        configs[idx] = std::move(run);
    }

    // Independent simulations; a pool bounded by the hardware keeps the
    // Cartesian product from oversubscribing.
    std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    workers = std::min(workers, total == 0 ? std::size_t{1} : total);
    std::atomic<std::size_t> nextIdx{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t idx = nextIdx.fetch_add(1);
            if (idx >= total) return;
            try {
                RunOutput out = run_simulation(configs[idx]);
                rows[idx].summary = out.summary;
            } catch (const std::exception& e) {
                rows[idx].failed = true;
                rows[idx].error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return rows;
}

}  // namespace sphflow
