#pragma once

#include "wsn/harness/config.hpp"
#include "wsn/routing/packet.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace wsn {

// Nearest-rank percentile over a sorted ascending sample; q in (0,1].
double percentileNearestRank(const std::vector<double>& sorted, double q);

struct DelayStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
    double p99 = 0.0;
};
DelayStats summarizeDelays(std::vector<double> samples); // sorts its copy

struct ClassTally {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t deliveredOnTime = 0;

    // Late deliveries count as misses; so do drops and packets still in flight.
    double missRatio() const {
        return generated == 0 ? 0.0
                              : 1.0 - static_cast<double>(deliveredOnTime) /
                                          static_cast<double>(generated);
    }
    double deliveryRatio() const {
        return generated == 0 ? 0.0
                              : static_cast<double>(delivered) / static_cast<double>(generated);
    }
};

struct EnergyTotals {
    double txJ = 0.0;
    double rxJ = 0.0;
    double idleJ = 0.0;
    double sleepJ = 0.0;
    double cpuJ = 0.0;
    int deadNodes = 0;
    double meanResidualJ = 0.0;

    double totalJ() const { return txJ + rxJ + idleJ + sleepJ + cpuJ; }
};

struct ControlTotals {
    std::uint64_t beaconFrames = 0;
    std::uint64_t beaconBytes = 0;
    std::uint64_t probeFrames = 0;
    std::uint64_t probeBytes = 0;
    std::uint64_t responseFrames = 0;
    std::uint64_t responseBytes = 0;
    std::uint64_t backpressureFrames = 0;
    std::uint64_t backpressureBytes = 0;

    std::uint64_t totalBytes() const {
        return beaconBytes + probeBytes + responseBytes + backpressureBytes;
    }
};

struct MacTotals {
    std::uint64_t framesSent = 0;
    std::uint64_t dataFramesSent = 0;
    std::uint64_t ackFramesSent = 0;
    std::uint64_t collisions = 0; // data frames garbled at their addressee
    std::uint64_t lossDrops = 0;  // data frames lost at their addressee by the loss draw
    std::uint64_t retransmissions = 0;
    std::uint64_t falseFailures = 0;
    std::uint64_t duplicatesSuppressed = 0;
    double meanUtilization = 0.0;
};

struct AggregationTotals {
    std::uint64_t framesFlushed = 0;
    std::map<int, std::uint64_t> degreeHistogram;
    std::uint64_t bytesSaved = 0;
    std::uint64_t holdViolations = 0;

    double meanDegree() const {
        std::uint64_t frames = 0, units = 0;
        for (const auto& [d, n] : degreeHistogram) {
            frames += n;
            units += static_cast<std::uint64_t>(d) * n;
        }
        return frames == 0 ? 0.0 : static_cast<double>(units) / static_cast<double>(frames);
    }
};

struct LocalizationTotals {
    int localized = 0;
    int total = 0;
    double meanErrorM = 0.0;
    double p95ErrorM = 0.0;
};

struct DutyCycleTotals {
    std::uint64_t sleepEvents = 0;
    double sleepSeconds = 0.0;
    std::uint64_t framesHeardBySleeping = 0; // must stay 0; audited
};

struct TransportTotals {
    std::uint64_t reorderReleased = 0;
    std::uint64_t reorderDuplicates = 0;
    std::uint64_t rebinds = 0;
};

struct TimeseriesRow {
    double t = 0.0;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t deliveredOnTime = 0;
    std::uint64_t dropped = 0;
    double energyUsedJ = 0.0;
    std::uint64_t backlogPackets = 0;
    int aliveNodes = 0;
    int awakeNodes = 0;
};

struct PacketRecord {
    PacketId id = 0;
    int priorityClass = 0;
    double createdAt = 0.0;
    std::string outcome; // "delivered", a drop reason, or "inFlight"
    double terminalAt = 0.0;
    double delaySeconds = 0.0; // deliveries only
    int hops = 0;
    int payloadBytes = 0;
};

struct RunMetrics {
    std::string scenarioName;
    std::uint64_t seed = 0;
    double durationSeconds = 0.0;

    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t deliveredOnTime = 0;
    std::uint64_t deliveredPayloadBytes = 0;
    std::array<std::uint64_t, kDropReasonCount> dropped{};
    std::uint64_t inFlightAtEnd = 0;
    std::map<int, ClassTally> byClass;

    std::vector<double> delaySamples; // end-to-end, deliveries only
    DelayStats delay;                 // filled by finalize()

    EnergyTotals energy;
    ControlTotals control;
    MacTotals mac;
    AggregationTotals aggregation;
    LocalizationTotals localization;
    DutyCycleTotals dutyCycle;
    TransportTotals transport;

    std::vector<TimeseriesRow> timeseries;
    std::vector<PacketRecord> packetRecords;

    std::uint64_t droppedTotal() const {
        std::uint64_t n = 0;
        for (auto d : dropped)
            n += d;
        return n;
    }
    double missRatio() const {
        return generated == 0 ? 0.0
                              : 1.0 - static_cast<double>(deliveredOnTime) /
                                          static_cast<double>(generated);
    }
    double deliveryRatio() const {
        return generated == 0 ? 0.0
                              : static_cast<double>(delivered) / static_cast<double>(generated);
    }
    // Every generated packet must be delivered, dropped, or still in flight.
    bool conserved() const {
        return generated == delivered + droppedTotal() + inFlightAtEnd;
    }

    void finalize(); // delay stats from samples
};

std::string metricsToJson(const RunMetrics& m);
std::string timeseriesToCsv(const RunMetrics& m);
std::string packetsToCsv(const RunMetrics& m);

// Writes summary.json, timeseries.csv (when enabled), packets.csv (when
// enabled), and config.json into outDir, creating it if needed. Output bytes
// depend only on (config, metrics): no wall-clock anywhere.
void writeRunOutputs(const ScenarioConfig& config, const RunMetrics& metrics,
                     const std::string& outDir);

} // namespace wsn
