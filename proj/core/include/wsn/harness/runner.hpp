#pragma once

#include "wsn/harness/config.hpp"
#include "wsn/harness/metrics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace wsn {

// Execute one scenario. When outDir is non-empty, write summary.json,
// timeseries.csv / packets.csv (as enabled), and the echoed config.json.
RunMetrics runScenario(const ScenarioConfig& config, std::uint64_t seed,
                       const std::string& outDir = {});

struct SweepSpec {
    std::string configText; // base document, overridden per grid point
    std::string sourceName;
    std::vector<std::string> overrides; // applied before the sweep parameter
    std::string paramPath;              // dotted override path
    std::vector<std::string> values;
    std::vector<std::uint64_t> seeds;
};

// Cartesian grid over values x seeds, rows in declaration order regardless of
// how the runs execute. Each run lands in <outDir>/<param>=<value>/seed=<n>/;
// one summary row per run is collected into <outDir>/sweep.csv.
void runSweep(const SweepSpec& spec, const std::string& outDir);

// Side-by-side comparison of previously written run directories, one column
// per run, one row per numeric metric in summary.json (keys flattened with
// dots), plus a relative-delta column against the first run for every other
// run. Throws std::runtime_error on a missing summary or a schema mismatch.
std::string reportRuns(const std::vector<std::string>& runDirs);

} // namespace wsn
