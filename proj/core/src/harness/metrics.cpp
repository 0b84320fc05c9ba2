#include "wsn/harness/metrics.hpp"

#include "wsn/util/assert.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>

namespace wsn {

using json = nlohmann::ordered_json;

double percentileNearestRank(const std::vector<double>& sorted, double q) {
    WSN_ASSERT(!sorted.empty(), "percentile of empty sample");
    WSN_ASSERT(q > 0.0 && q <= 1.0, "percentile q out of range");
    const auto n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n)));
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
}

DelayStats summarizeDelays(std::vector<double> samples) {
    DelayStats s;
    s.count = samples.size();
    if (samples.empty())
        return s;
    std::sort(samples.begin(), samples.end());
    s.mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
             static_cast<double>(samples.size());
    s.p50 = percentileNearestRank(samples, 0.50);
    s.p95 = percentileNearestRank(samples, 0.95);
    s.p99 = percentileNearestRank(samples, 0.99);
    return s;
}

void RunMetrics::finalize() { delay = summarizeDelays(delaySamples); }

namespace {

std::string g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

std::string metricsToJson(const RunMetrics& m) {
    json j;
    j["schemaVersion"] = kConfigSchemaVersion;
    j["scenario"] = m.scenarioName;
    j["seed"] = m.seed;
    j["durationSeconds"] = m.durationSeconds;

    json drops;
    for (std::size_t i = 0; i < kDropReasonCount; ++i)
        drops[dropReasonName(static_cast<DropReason>(i))] = m.dropped[i];
    drops["total"] = m.droppedTotal();

    json byClass = json::array();
    for (const auto& [cls, tally] : m.byClass)
        byClass.push_back(json{{"class", cls},
                               {"generated", tally.generated},
                               {"delivered", tally.delivered},
                               {"deliveredOnTime", tally.deliveredOnTime},
                               {"missRatio", tally.missRatio()},
                               {"deliveryRatio", tally.deliveryRatio()}});

    j["packets"] = {{"generated", m.generated},
                    {"delivered", m.delivered},
                    {"deliveredOnTime", m.deliveredOnTime},
                    {"missRatio", m.missRatio()},
                    {"deliveryRatio", m.deliveryRatio()},
                    {"inFlightAtEnd", m.inFlightAtEnd},
                    {"drops", std::move(drops)},
                    {"byClass", std::move(byClass)}};
    j["delay"] = {{"count", m.delay.count},
                  {"mean", m.delay.mean},
                  {"p50", m.delay.p50},
                  {"p95", m.delay.p95},
                  {"p99", m.delay.p99}};

    const double perByteJ =
        m.deliveredPayloadBytes == 0
            ? 0.0
            : m.energy.totalJ() / static_cast<double>(m.deliveredPayloadBytes);
    j["energy"] = {{"txJ", m.energy.txJ},
                   {"rxJ", m.energy.rxJ},
                   {"idleJ", m.energy.idleJ},
                   {"sleepJ", m.energy.sleepJ},
                   {"cpuJ", m.energy.cpuJ},
                   {"totalJ", m.energy.totalJ()},
                   {"perDeliveredPayloadByteJ", perByteJ},
                   {"deadNodes", m.energy.deadNodes},
                   {"meanResidualJ", m.energy.meanResidualJ}};

    j["control"] = {{"beaconFrames", m.control.beaconFrames},
                    {"beaconBytes", m.control.beaconBytes},
                    {"probeFrames", m.control.probeFrames},
                    {"probeBytes", m.control.probeBytes},
                    {"responseFrames", m.control.responseFrames},
                    {"responseBytes", m.control.responseBytes},
                    {"backpressureFrames", m.control.backpressureFrames},
                    {"backpressureBytes", m.control.backpressureBytes},
                    {"totalBytes", m.control.totalBytes()}};
    j["mac"] = {{"framesSent", m.mac.framesSent},
                {"dataFramesSent", m.mac.dataFramesSent},
                {"ackFramesSent", m.mac.ackFramesSent},
                {"collisions", m.mac.collisions},
                {"lossDrops", m.mac.lossDrops},
                {"retransmissions", m.mac.retransmissions},
                {"falseFailures", m.mac.falseFailures},
                {"duplicatesSuppressed", m.mac.duplicatesSuppressed},
                {"meanUtilization", m.mac.meanUtilization}};

    json hist;
    for (const auto& [degree, count] : m.aggregation.degreeHistogram)
        hist[std::to_string(degree)] = count;
    j["aggregation"] = {{"framesFlushed", m.aggregation.framesFlushed},
                        {"meanDegree", m.aggregation.meanDegree()},
                        {"degreeHistogram", std::move(hist)},
                        {"bytesSaved", m.aggregation.bytesSaved},
                        {"holdViolations", m.aggregation.holdViolations}};
    j["localization"] = {{"localized", m.localization.localized},
                         {"total", m.localization.total},
                         {"meanErrorM", m.localization.meanErrorM},
                         {"p95ErrorM", m.localization.p95ErrorM}};
    j["dutyCycle"] = {{"sleepEvents", m.dutyCycle.sleepEvents},
                      {"sleepSeconds", m.dutyCycle.sleepSeconds},
                      {"framesHeardBySleeping", m.dutyCycle.framesHeardBySleeping}};
    j["transport"] = {{"reorderReleased", m.transport.reorderReleased},
                      {"reorderDuplicates", m.transport.reorderDuplicates},
                      {"rebinds", m.transport.rebinds}};
    j["conservation"] = {{"generated", m.generated},
                         {"accounted", m.delivered + m.droppedTotal() + m.inFlightAtEnd},
                         {"ok", m.conserved()}};
    return j.dump(2) + "\n";
}

std::string timeseriesToCsv(const RunMetrics& m) {
    std::string out = "t,generated,delivered,deliveredOnTime,dropped,energyUsedJ,"
                      "backlogPackets,aliveNodes,awakeNodes\n";
    for (const auto& r : m.timeseries) {
        out += g9(r.t);
        out += ',';
        out += std::to_string(r.generated);
        out += ',';
        out += std::to_string(r.delivered);
        out += ',';
        out += std::to_string(r.deliveredOnTime);
        out += ',';
        out += std::to_string(r.dropped);
        out += ',';
        out += g9(r.energyUsedJ);
        out += ',';
        out += std::to_string(r.backlogPackets);
        out += ',';
        out += std::to_string(r.aliveNodes);
        out += ',';
        out += std::to_string(r.awakeNodes);
        out += '\n';
    }
    return out;
}

std::string packetsToCsv(const RunMetrics& m) {
    std::string out = "id,class,createdAt,outcome,terminalAt,delaySeconds,hops,payloadBytes\n";
    for (const auto& r : m.packetRecords) {
        out += std::to_string(r.id);
        out += ',';
        out += std::to_string(r.priorityClass);
        out += ',';
        out += g9(r.createdAt);
        out += ',';
        out += r.outcome;
        out += ',';
        out += g9(r.terminalAt);
        out += ',';
        out += g9(r.delaySeconds);
        out += ',';
        out += std::to_string(r.hops);
        out += ',';
        out += std::to_string(r.payloadBytes);
        out += '\n';
    }
    return out;
}

namespace {

void writeFile(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << content;
}

} // namespace

void writeRunOutputs(const ScenarioConfig& config, const RunMetrics& metrics,
                     const std::string& outDir) {
    const std::filesystem::path dir(outDir);
    std::filesystem::create_directories(dir);
    writeFile(dir / "summary.json", metricsToJson(metrics));
    if (config.outputs.timeseries)
        writeFile(dir / "timeseries.csv", timeseriesToCsv(metrics));
    if (config.outputs.packetTrace)
        writeFile(dir / "packets.csv", packetsToCsv(metrics));
    writeFile(dir / "config.json", configToJson(config));
}

} // namespace wsn
