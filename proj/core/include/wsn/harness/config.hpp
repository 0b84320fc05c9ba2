#pragma once

#include "wsn/aida/policy.hpp"
#include "wsn/energy/coverage.hpp"
#include "wsn/energy/ledger.hpp"
#include "wsn/mac/params.hpp"
#include "wsn/routing/params.hpp"
#include "wsn/sched/queue.hpp"
#include "wsn/sim/failure.hpp"
#include "wsn/sim/geometry.hpp"
#include "wsn/sim/radio.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsn {

inline constexpr int kConfigSchemaVersion = 1;

// Config loading/validation failures; .what() is a single line naming the
// offending key and the violated constraint.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct TopologyConfig {
    int count = 100;
    double width = 200.0;
    double height = 200.0;
    double anchorFraction = 0.1;
};

struct EnergyConfig {
    double initialJoules = 1000.0;
    EnergyRates rates{};
    double cpuPerPacketSeconds = 0.001;
};

enum class LocalizationMethod { Truth, Centroid, AreaRefined, InjectedError };

struct LocalizationConfig {
    LocalizationMethod method = LocalizationMethod::InjectedError;
    double sigmaMeters = 2.0;    // injectedError only
    double gridResolution = 5.0; // areaRefined only
};

struct DutyCycleConfig {
    bool enabled = false;
    double startAfter = 5.0;    // let beacons warm the tables first
    double checkPeriod = 5.0;
    double sleepDuration = 10.0;
    SensingParams sensing{};
};

struct TransportConfig {
    double staleness = 4.0;     // T_stale: sender lag and handover-pointer life
    double rebindRadius = 30.0; // dest radius for entity-addressed packets
    int reorderCapacity = 16;
    bool bindingOracle = false; // global directory, zero lag, for differential runs
};

struct RegionConfig {
    Location center{};
    double radius = 0.0;
};

struct FlowConfig {
    std::string name;
    RegionConfig source{};
    RegionConfig dest{};           // ignored when destEntity is set
    std::optional<EntityId> destEntity;
    std::optional<EntityId> sourceEntity; // required for ordered flows
    double periodSeconds = 0.25;
    int payloadBytes = 64;
    double deadlineOffsetSeconds = 0.5;
    int priorityClass = 0;
    double startTime = 0.0;
    double stopTime = 0.0; // 0 = run until duration
    bool ordered = false;  // in-order exactly-once app delivery
};

struct TrafficConfig {
    std::vector<FlowConfig> flows;
};

struct EntityMigration {
    SimTime at = 0.0;
    NodeId node = kNoNode;
};

struct EntityConfig {
    EntityId id = 0;
    NodeId node = kNoNode;
    std::vector<EntityMigration> migrations;
};

struct OutputsConfig {
    bool timeseries = true;
    bool packetTrace = false;
    double sampleInterval = 1.0;
};

struct ScenarioConfig {
    int schemaVersion = kConfigSchemaVersion;
    std::string name = "scenario";
    double durationSeconds = 30.0;
    TopologyConfig topology{};
    RadioModel radio{};
    EnergyConfig energy{};
    MacParams mac{};
    AggregationPolicy aggregation{};
    QueueParams scheduler{};
    RoutingParams routing{};
    LocalizationConfig localization{};
    DutyCycleConfig dutyCycle{};
    TransportConfig transport{};
    TrafficConfig traffic{};
    std::vector<EntityConfig> entities;
    FailureSchedule failures;
    OutputsConfig outputs{};

    Rect area() const { return {topology.width, topology.height}; }
    // Highest class present in traffic (admission bypass).
    int maxPriorityClass() const;
};

// Throws ConfigError with an offending-key message on any violation,
// including unknown keys anywhere in the document.
ScenarioConfig loadConfig(const std::string& path);
ScenarioConfig parseConfig(const std::string& jsonText, const std::string& sourceName);

// Apply `key.path=value` overrides to the JSON document before parsing.
ScenarioConfig parseConfigWithOverrides(const std::string& jsonText,
                                        const std::string& sourceName,
                                        const std::vector<std::string>& overrides);

std::string configToJson(const ScenarioConfig& config); // round-trips via parseConfig

} // namespace wsn
