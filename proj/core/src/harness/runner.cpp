#include "wsn/harness/runner.hpp"

#include "wsn/harness/simulation.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace wsn {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

RunMetrics runScenario(const ScenarioConfig& config, std::uint64_t seed,
                       const std::string& outDir) {
    Simulation sim(config, seed);
    RunMetrics metrics = sim.run();
    if (!outDir.empty())
        writeRunOutputs(config, metrics, outDir);
    return metrics;
}

void runSweep(const SweepSpec& spec, const std::string& outDir) {
    std::filesystem::create_directories(outDir);
    std::string csv = "param,value,seed,generated,delivered,deliveredOnTime,missRatio,"
                      "deliveryRatio,delayMeanS,delayP95S,energyTotalJ,controlBytes,"
                      "macFramesSent,collisions\n";
    for (const std::string& value : spec.values) {
        for (std::uint64_t seed : spec.seeds) {
            std::vector<std::string> overrides = spec.overrides;
            overrides.push_back(spec.paramPath + "=" + value);
            const ScenarioConfig config =
                parseConfigWithOverrides(spec.configText, spec.sourceName, overrides);
            const std::filesystem::path dir = std::filesystem::path(outDir) /
                                              (spec.paramPath + "=" + value) /
                                              ("seed=" + std::to_string(seed));
            const RunMetrics m = runScenario(config, seed, dir.string());
            csv += spec.paramPath + ',' + value + ',' + std::to_string(seed) + ',' +
                   std::to_string(m.generated) + ',' + std::to_string(m.delivered) + ',' +
                   std::to_string(m.deliveredOnTime) + ',' + g9(m.missRatio()) + ',' +
                   g9(m.deliveryRatio()) + ',' + g9(m.delay.mean) + ',' + g9(m.delay.p95) +
                   ',' + g9(m.energy.totalJ()) + ',' +
                   std::to_string(m.control.totalBytes()) + ',' +
                   std::to_string(m.mac.framesSent) + ',' +
                   std::to_string(m.mac.collisions) + '\n';
        }
    }
    std::ofstream out(std::filesystem::path(outDir) / "sweep.csv", std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + outDir + "/sweep.csv");
    out << csv;
}

namespace {

// Depth-first flatten of the numeric scalars; key order follows the document.
void flattenJson(const ordered_json& j, const std::string& prefix,
                 std::vector<std::pair<std::string, double>>& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            flattenJson(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (j.is_array()) {
        for (std::size_t i = 0; i < j.size(); ++i)
            flattenJson(j[i], prefix + "[" + std::to_string(i) + "]", out);
    } else if (j.is_number()) {
        out.emplace_back(prefix, j.get<double>());
    } else if (j.is_boolean()) {
        out.emplace_back(prefix, j.get<bool>() ? 1.0 : 0.0);
    }
}

} // namespace

std::string reportRuns(const std::vector<std::string>& runDirs) {
    if (runDirs.empty())
        throw std::runtime_error("report needs at least one run directory");

    std::vector<std::vector<std::pair<std::string, double>>> flats;
    for (const std::string& dir : runDirs) {
        const auto text = readFile(std::filesystem::path(dir) / "summary.json");
        ordered_json j = ordered_json::parse(text);
        if (!j.contains("schemaVersion") || j["schemaVersion"].get<int>() != 1)
            throw std::runtime_error("schema version mismatch in " + dir);
        std::vector<std::pair<std::string, double>> flat;
        flattenJson(j, "", flat);
        flats.push_back(std::move(flat));
    }

    // Row order: first run's keys, then any keys only later runs have.
    std::vector<std::string> rows;
    for (const auto& flat : flats)
        for (const auto& [key, value] : flat)
            if (std::find(rows.begin(), rows.end(), key) == rows.end())
                rows.push_back(key);

    std::string csv = "metric";
    for (const std::string& dir : runDirs)
        csv += ',' + dir;
    for (std::size_t i = 1; i < runDirs.size(); ++i)
        csv += ",delta(" + runDirs[i] + ")";
    csv += '\n';

    for (const std::string& key : rows) {
        csv += key;
        std::vector<std::optional<double>> vals;
        for (const auto& flat : flats) {
            std::optional<double> v;
            for (const auto& [k, value] : flat)
                if (k == key) {
                    v = value;
                    break;
                }
            vals.push_back(v);
            csv += ',';
            if (v)
                csv += g9(*v);
        }
        // Relative delta against the first run; absolute when the base is 0.
        for (std::size_t i = 1; i < vals.size(); ++i) {
            csv += ',';
            if (!vals[i] || !vals[0])
                continue;
            const double base = *vals[0];
            const double diff = *vals[i] - base;
            csv += g9(base != 0.0 ? diff / base : diff);
        }
        csv += '\n';
    }
    return csv;
}

} // namespace wsn
