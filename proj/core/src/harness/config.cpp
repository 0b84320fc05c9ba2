#include "wsn/harness/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace wsn {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
    throw ConfigError("config error: " + key + ": " + msg);
}

void require(bool ok, const std::string& key, const std::string& msg) {
    if (!ok)
        fail(key, msg);
}

// Typed accessor over one JSON object level; unknown keys are rejected when
// the reader is finished.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        require(j_.is_object(), path_, "must be an object");
    }

    std::string at(const char* key) const { return path_ + "." + key; }

    bool has(const char* key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    double num(const char* key, double def) {
        seen_.insert(key);
        if (!j_.contains(key))
            return def;
        require(j_[key].is_number(), at(key), "must be a number");
        return j_[key].get<double>();
    }

    int integer(const char* key, int def) {
        seen_.insert(key);
        if (!j_.contains(key))
            return def;
        require(j_[key].is_number_integer(), at(key), "must be an integer");
        return j_[key].get<int>();
    }

    bool boolean(const char* key, bool def) {
        seen_.insert(key);
        if (!j_.contains(key))
            return def;
        require(j_[key].is_boolean(), at(key), "must be a boolean");
        return j_[key].get<bool>();
    }

    std::string str(const char* key, const std::string& def) {
        seen_.insert(key);
        if (!j_.contains(key))
            return def;
        require(j_[key].is_string(), at(key), "must be a string");
        return j_[key].get<std::string>();
    }

    const json* object(const char* key) {
        seen_.insert(key);
        if (!j_.contains(key))
            return nullptr;
        require(j_[key].is_object(), at(key), "must be an object");
        return &j_[key];
    }

    const json* array(const char* key) {
        seen_.insert(key);
        if (!j_.contains(key))
            return nullptr;
        require(j_[key].is_array(), at(key), "must be an array");
        return &j_[key];
    }

    void finish() const {
        for (const auto& [key, value] : j_.items())
            if (!seen_.count(key))
                fail(path_ + "." + key, "unknown key");
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Location parsePoint(Reader& r) {
    Location loc{r.num("x", 0.0), r.num("y", 0.0)};
    return loc;
}

RegionConfig parseRegion(const json& j, const std::string& path, const Rect& area) {
    Reader r(j, path);
    RegionConfig region;
    region.center = parsePoint(r);
    region.radius = r.num("radius", 0.0);
    r.finish();
    require(region.radius >= 0.0, path + ".radius", "must be >= 0");
    require(area.contains(region.center), path, "center must lie inside the area");
    return region;
}

TopologyConfig parseTopology(const json& j, const std::string& path) {
    Reader r(j, path);
    TopologyConfig t;
    t.count = r.integer("count", t.count);
    t.width = r.num("width", t.width);
    t.height = r.num("height", t.height);
    t.anchorFraction = r.num("anchorFraction", t.anchorFraction);
    r.finish();
    require(t.count >= 1, path + ".count", "must be >= 1");
    require(t.width > 0.0, path + ".width", "must be > 0");
    require(t.height > 0.0, path + ".height", "must be > 0");
    require(t.anchorFraction >= 0.0 && t.anchorFraction <= 1.0, path + ".anchorFraction",
            "must be in [0,1]");
    return t;
}

RadioModel parseRadio(const json& j, const std::string& path) {
    Reader r(j, path);
    RadioModel m;
    m.rangeMeters = r.num("rangeMeters", m.rangeMeters);
    m.bitrateBps = r.num("bitrateBps", m.bitrateBps);
    m.lossProbability = r.num("lossProbability", m.lossProbability);
    r.finish();
    require(m.rangeMeters > 0.0, path + ".rangeMeters", "must be > 0");
    require(m.bitrateBps > 0.0, path + ".bitrateBps", "must be > 0");
    require(m.lossProbability >= 0.0 && m.lossProbability <= 1.0, path + ".lossProbability",
            "must be in [0,1]");
    return m;
}

EnergyConfig parseEnergy(const json& j, const std::string& path) {
    Reader r(j, path);
    EnergyConfig e;
    e.initialJoules = r.num("initialJoules", e.initialJoules);
    e.rates.txW = r.num("txW", e.rates.txW);
    e.rates.rxW = r.num("rxW", e.rates.rxW);
    e.rates.idleW = r.num("idleW", e.rates.idleW);
    e.rates.sleepW = r.num("sleepW", e.rates.sleepW);
    e.rates.cpuW = r.num("cpuW", e.rates.cpuW);
    e.cpuPerPacketSeconds = r.num("cpuPerPacketSeconds", e.cpuPerPacketSeconds);
    r.finish();
    require(e.initialJoules > 0.0, path + ".initialJoules", "must be > 0");
    for (auto [v, k] : {std::pair{e.rates.txW, "txW"}, {e.rates.rxW, "rxW"},
                        {e.rates.idleW, "idleW"}, {e.rates.sleepW, "sleepW"},
                        {e.rates.cpuW, "cpuW"}})
        require(v >= 0.0, path + "." + k, "must be >= 0");
    require(e.cpuPerPacketSeconds >= 0.0, path + ".cpuPerPacketSeconds", "must be >= 0");
    return e;
}

MacParams parseMac(const json& j, const std::string& path, double beaconPeriod) {
    Reader r(j, path);
    MacParams m;
    m.slotTime = r.num("slotTime", m.slotTime);
    m.cwMin = r.integer("cwMin", m.cwMin);
    m.cwMax = r.integer("cwMax", m.cwMax);
    m.retryLimit = r.integer("retryLimit", m.retryLimit);
    m.ackTimeout = r.num("ackTimeout", m.ackTimeout);
    m.headerBytes = r.integer("headerBytes", m.headerBytes);
    m.suspicionTimeout = r.num("suspicionTimeout", 3.0 * beaconPeriod);
    m.sweepPeriod = r.num("sweepPeriod", beaconPeriod);
    r.finish();
    require(m.slotTime > 0.0, path + ".slotTime", "must be > 0");
    require(m.cwMin >= 1, path + ".cwMin", "must be >= 1");
    require(m.cwMin <= m.cwMax, path + ".cwMax", "must be >= cwMin");
    require(m.retryLimit >= 0, path + ".retryLimit", "must be >= 0");
    require(m.ackTimeout > 0.0, path + ".ackTimeout", "must be > 0");
    require(m.headerBytes >= 1, path + ".headerBytes", "must be >= 1");
    require(m.suspicionTimeout > 0.0, path + ".suspicionTimeout", "must be > 0");
    require(m.sweepPeriod > 0.0, path + ".sweepPeriod", "must be > 0");
    return m;
}

AggregationPolicy parseAggregation(const json& j, const std::string& path) {
    Reader r(j, path);
    AggregationPolicy a;
    const std::string mode = r.str("mode", "None");
    if (mode == "None")
        a.mode = AggregationMode::None;
    else if (mode == "FixedDegree")
        a.mode = AggregationMode::FixedDegree;
    else if (mode == "OnDemand")
        a.mode = AggregationMode::OnDemand;
    else if (mode == "Adaptive")
        a.mode = AggregationMode::Adaptive;
    else
        fail(path + ".mode", "must be one of None|FixedDegree|OnDemand|Adaptive");
    a.maxDegree = r.integer("maxDegree", a.maxDegree);
    a.fixedDegree = r.integer("fixedDegree", a.fixedDegree);
    a.flushTimerSeconds = r.num("flushTimerSeconds", a.flushTimerSeconds);
    a.guardSeconds = r.num("guardSeconds", a.guardSeconds);
    a.uLow = r.num("uLow", a.uLow);
    a.uHigh = r.num("uHigh", a.uHigh);
    a.bufferCapacityUnits = r.integer("bufferCapacityUnits", a.bufferCapacityUnits);
    r.finish();
    require(a.maxDegree >= 1, path + ".maxDegree", "must be >= 1");
    require(a.fixedDegree >= 1 && a.fixedDegree <= a.maxDegree, path + ".fixedDegree",
            "must be in [1, maxDegree]");
    require(a.flushTimerSeconds > 0.0, path + ".flushTimerSeconds", "must be > 0");
    require(a.guardSeconds >= 0.0, path + ".guardSeconds", "must be >= 0");
    require(a.uLow >= 0.0 && a.uLow < a.uHigh && a.uHigh <= 1.0, path + ".uLow",
            "requires 0 <= uLow < uHigh <= 1");
    require(a.bufferCapacityUnits >= 1, path + ".bufferCapacityUnits", "must be >= 1");
    return a;
}

QueueParams parseScheduler(const json& j, const std::string& path) {
    Reader r(j, path);
    QueueParams q;
    q.capacity = r.integer("capacity", q.capacity);
    r.finish();
    require(q.capacity >= 1, path + ".capacity", "must be >= 1");
    return q;
}

RoutingParams parseRouting(const json& j, const std::string& path) {
    Reader r(j, path);
    RoutingParams p;
    const std::string mode = r.str("mode", "TableDriven");
    if (mode == "TableDriven")
        p.mode = RoutingMode::TableDriven;
    else if (mode == "Greedy")
        p.mode = RoutingMode::Greedy;
    else if (mode == "LazyBinding")
        p.mode = RoutingMode::LazyBinding;
    else
        fail(path + ".mode", "must be one of TableDriven|Greedy|LazyBinding");
    p.setpointSpeed = r.num("setpointSpeed", p.setpointSpeed);
    p.weightExponent = r.num("weightExponent", p.weightExponent);
    p.beaconPeriod = r.num("beaconPeriod", p.beaconPeriod);
    p.neighborTimeout = r.num("neighborTimeout", p.neighborTimeout);
    p.minDelay = r.num("minDelay", p.minDelay);
    p.ttl = r.integer("ttl", p.ttl);
    p.sectorHalfAngleDeg = r.num("sectorHalfAngleDeg", p.sectorHalfAngleDeg);
    p.ctsWindow = r.num("ctsWindow", p.ctsWindow);
    p.admissionThreshold = r.num("admissionThreshold", p.admissionThreshold);
    p.backpressureFactor = r.num("backpressureFactor", p.backpressureFactor);
    p.missAlpha = r.num("missAlpha", p.missAlpha);
    r.finish();
    require(p.setpointSpeed > 0.0, path + ".setpointSpeed", "must be > 0");
    require(p.weightExponent >= 0.0, path + ".weightExponent", "must be >= 0");
    require(p.beaconPeriod > 0.0, path + ".beaconPeriod", "must be > 0");
    require(p.neighborTimeout > 0.0, path + ".neighborTimeout", "must be > 0");
    require(p.minDelay > 0.0, path + ".minDelay", "must be > 0");
    require(p.ttl >= 1, path + ".ttl", "must be >= 1");
    require(p.sectorHalfAngleDeg > 0.0 && p.sectorHalfAngleDeg <= 90.0,
            path + ".sectorHalfAngleDeg", "must be in (0,90]");
    require(p.ctsWindow > 0.0, path + ".ctsWindow", "must be > 0");
    require(p.admissionThreshold >= 0.0 && p.admissionThreshold <= 1.0,
            path + ".admissionThreshold", "must be in [0,1]");
    require(p.backpressureFactor >= 1.0, path + ".backpressureFactor", "must be >= 1");
    require(p.missAlpha > 0.0 && p.missAlpha <= 1.0, path + ".missAlpha",
            "must be in (0,1]");
    return p;
}

LocalizationConfig parseLocalization(const json& j, const std::string& path) {
    Reader r(j, path);
    LocalizationConfig l;
    const std::string method = r.str("method", "injectedError");
    if (method == "truth")
        l.method = LocalizationMethod::Truth;
    else if (method == "centroid")
        l.method = LocalizationMethod::Centroid;
    else if (method == "areaRefined")
        l.method = LocalizationMethod::AreaRefined;
    else if (method == "injectedError")
        l.method = LocalizationMethod::InjectedError;
    else
        fail(path + ".method", "must be one of truth|centroid|areaRefined|injectedError");
    l.sigmaMeters = r.num("sigmaMeters", l.sigmaMeters);
    l.gridResolution = r.num("gridResolution", l.gridResolution);
    r.finish();
    require(l.sigmaMeters >= 0.0, path + ".sigmaMeters", "must be >= 0");
    require(l.gridResolution > 0.0, path + ".gridResolution", "must be > 0");
    return l;
}

DutyCycleConfig parseDutyCycle(const json& j, const std::string& path) {
    Reader r(j, path);
    DutyCycleConfig d;
    d.enabled = r.boolean("enabled", d.enabled);
    d.startAfter = r.num("startAfter", d.startAfter);
    d.checkPeriod = r.num("checkPeriod", d.checkPeriod);
    d.sleepDuration = r.num("sleepDuration", d.sleepDuration);
    d.sensing.sensingRadius = r.num("sensingRadius", d.sensing.sensingRadius);
    d.sensing.gridResolution = r.num("gridResolution", d.sensing.gridResolution);
    r.finish();
    require(d.startAfter >= 0.0, path + ".startAfter", "must be >= 0");
    require(d.checkPeriod > 0.0, path + ".checkPeriod", "must be > 0");
    require(d.sleepDuration > 0.0, path + ".sleepDuration", "must be > 0");
    require(d.sensing.sensingRadius > 0.0, path + ".sensingRadius", "must be > 0");
    require(d.sensing.gridResolution > 0.0 &&
                d.sensing.gridResolution <= d.sensing.sensingRadius / 4.0 + 1e-9,
            path + ".gridResolution", "must be <= sensingRadius/4");
    return d;
}

TransportConfig parseTransport(const json& j, const std::string& path) {
    Reader r(j, path);
    TransportConfig t;
    t.staleness = r.num("staleness", t.staleness);
    t.rebindRadius = r.num("rebindRadius", t.rebindRadius);
    t.reorderCapacity = r.integer("reorderCapacity", t.reorderCapacity);
    t.bindingOracle = r.boolean("bindingOracle", t.bindingOracle);
    r.finish();
    require(t.staleness >= 0.0, path + ".staleness", "must be >= 0");
    require(t.rebindRadius > 0.0, path + ".rebindRadius", "must be > 0");
    require(t.reorderCapacity >= 1, path + ".reorderCapacity", "must be >= 1");
    return t;
}

FlowConfig parseFlow(const json& j, const std::string& path, const Rect& area,
                     double duration) {
    Reader r(j, path);
    FlowConfig f;
    f.name = r.str("name", "flow");
    if (const json* src = r.object("source"))
        f.source = parseRegion(*src, path + ".source", area);
    else
        fail(path + ".source", "required");
    bool destSeen = false;
    if (const json* dst = r.object("dest")) {
        f.dest = parseRegion(*dst, path + ".dest", area);
        destSeen = true;
    }
    if (r.has("destEntity"))
        f.destEntity = static_cast<EntityId>(r.integer("destEntity", 0));
    if (r.has("sourceEntity"))
        f.sourceEntity = static_cast<EntityId>(r.integer("sourceEntity", 0));
    f.periodSeconds = r.num("periodSeconds", f.periodSeconds);
    f.payloadBytes = r.integer("payloadBytes", f.payloadBytes);
    f.deadlineOffsetSeconds = r.num("deadlineOffsetSeconds", f.deadlineOffsetSeconds);
    f.priorityClass = r.integer("priorityClass", f.priorityClass);
    f.startTime = r.num("startTime", f.startTime);
    f.stopTime = r.num("stopTime", f.stopTime);
    f.ordered = r.boolean("ordered", f.ordered);
    r.finish();
    require(destSeen || f.destEntity.has_value(), path + ".dest",
            "required unless destEntity is set");
    require(!f.destEntity || *f.destEntity >= 1, path + ".destEntity", "must be >= 1");
    require(!f.sourceEntity || *f.sourceEntity >= 1, path + ".sourceEntity", "must be >= 1");
    require(f.periodSeconds > 0.0, path + ".periodSeconds", "must be > 0");
    require(f.payloadBytes >= 1, path + ".payloadBytes", "must be >= 1");
    require(f.deadlineOffsetSeconds > 0.0, path + ".deadlineOffsetSeconds", "must be > 0");
    require(f.priorityClass >= 0, path + ".priorityClass", "must be >= 0");
    require(f.startTime >= 0.0, path + ".startTime", "must be >= 0");
    require(f.stopTime == 0.0 || f.stopTime > f.startTime, path + ".stopTime",
            "must be 0 or > startTime");
    require(f.stopTime <= duration, path + ".stopTime", "must be <= durationSeconds");
    if (f.ordered)
        require(f.destEntity && f.sourceEntity, path + ".ordered",
                "requires sourceEntity and destEntity");
    return f;
}

EntityConfig parseEntity(const json& j, const std::string& path, int nodeCount,
                         double duration) {
    Reader r(j, path);
    EntityConfig e;
    e.id = static_cast<EntityId>(r.integer("id", 0));
    e.node = static_cast<NodeId>(r.integer("node", 0));
    if (const json* m = r.array("migrations")) {
        SimTime last = 0.0;
        int idx = 0;
        for (const auto& mj : *m) {
            const std::string mpath = path + ".migrations." + std::to_string(idx++);
            Reader mr(mj, mpath);
            EntityMigration mig;
            mig.at = mr.num("at", 0.0);
            mig.node = static_cast<NodeId>(mr.integer("node", 0));
            mr.finish();
            require(mig.at > last, mpath + ".at", "must be strictly increasing and > 0");
            require(mig.at < duration, mpath + ".at", "must be < durationSeconds");
            require(mig.node < static_cast<NodeId>(nodeCount), mpath + ".node",
                    "must reference an existing node");
            last = mig.at;
            e.migrations.push_back(mig);
        }
    }
    r.finish();
    require(e.id >= 1, path + ".id", "must be >= 1");
    require(e.node < static_cast<NodeId>(nodeCount), path + ".node",
            "must reference an existing node");
    return e;
}

FailureEntry parseFailure(const json& j, const std::string& path, int nodeCount,
                          double duration, const Rect& area) {
    Reader r(j, path);
    FailureEntry f;
    f.at = r.num("at", 0.0);
    f.node = static_cast<NodeId>(r.integer("node", 0));
    const std::string kind = r.str("kind", "crash");
    if (kind == "crash")
        f.kind = FailureKind::Crash;
    else if (kind == "sleep")
        f.kind = FailureKind::SleepForce;
    else if (kind == "recover")
        f.kind = FailureKind::Recover;
    else if (kind == "moveTo")
        f.kind = FailureKind::MoveTo;
    else
        fail(path + ".kind", "must be one of crash|sleep|recover|moveTo");
    if (f.kind == FailureKind::MoveTo) {
        if (const json* to = r.object("to")) {
            Reader tr(*to, path + ".to");
            f.to = parsePoint(tr);
            tr.finish();
        } else {
            fail(path + ".to", "required for moveTo");
        }
        require(area.contains(f.to), path + ".to", "must lie inside the area");
    }
    r.finish();
    require(f.at >= 0.0 && f.at <= duration, path + ".at", "must be in [0,duration]");
    require(f.node < static_cast<NodeId>(nodeCount), path + ".node",
            "must reference an existing node");
    return f;
}

OutputsConfig parseOutputs(const json& j, const std::string& path) {
    Reader r(j, path);
    OutputsConfig o;
    o.timeseries = r.boolean("timeseries", o.timeseries);
    o.packetTrace = r.boolean("packetTrace", o.packetTrace);
    o.sampleInterval = r.num("sampleInterval", o.sampleInterval);
    r.finish();
    require(o.sampleInterval > 0.0, path + ".sampleInterval", "must be > 0");
    return o;
}

ScenarioConfig parseRoot(const json& j, const std::string& sourceName) {
    Reader r(j, sourceName);
    ScenarioConfig c;
    const int version = r.integer("schemaVersion", -1);
    require(version == kConfigSchemaVersion, sourceName + ".schemaVersion",
            "must be " + std::to_string(kConfigSchemaVersion));
    c.name = r.str("name", c.name);
    c.durationSeconds = r.num("durationSeconds", c.durationSeconds);
    require(c.durationSeconds > 0.0, sourceName + ".durationSeconds", "must be > 0");

    if (const json* t = r.object("topology"))
        c.topology = parseTopology(*t, sourceName + ".topology");
    if (const json* radio = r.object("radio"))
        c.radio = parseRadio(*radio, sourceName + ".radio");
    if (const json* e = r.object("energy"))
        c.energy = parseEnergy(*e, sourceName + ".energy");
    if (const json* routing = r.object("routing"))
        c.routing = parseRouting(*routing, sourceName + ".routing");
    if (const json* m = r.object("mac"))
        c.mac = parseMac(*m, sourceName + ".mac", c.routing.beaconPeriod);
    else
        c.mac = parseMac(json::object(), sourceName + ".mac", c.routing.beaconPeriod);
    if (const json* a = r.object("aggregation"))
        c.aggregation = parseAggregation(*a, sourceName + ".aggregation");
    if (const json* s = r.object("scheduler"))
        c.scheduler = parseScheduler(*s, sourceName + ".scheduler");
    if (const json* l = r.object("localization"))
        c.localization = parseLocalization(*l, sourceName + ".localization");
    if (const json* d = r.object("dutyCycle"))
        c.dutyCycle = parseDutyCycle(*d, sourceName + ".dutyCycle");
    if (const json* t = r.object("transport"))
        c.transport = parseTransport(*t, sourceName + ".transport");

    const Rect area = c.area();
    if (const json* traffic = r.object("traffic")) {
        Reader tr(*traffic, sourceName + ".traffic");
        if (const json* flows = tr.array("flows")) {
            int idx = 0;
            for (const auto& fj : *flows)
                c.traffic.flows.push_back(parseFlow(
                    fj, sourceName + ".traffic.flows." + std::to_string(idx++), area,
                    c.durationSeconds));
        }
        tr.finish();
    }
    if (const json* entities = r.array("entities")) {
        int idx = 0;
        std::set<EntityId> ids;
        for (const auto& ej : *entities) {
            EntityConfig e = parseEntity(ej, sourceName + ".entities." + std::to_string(idx),
                                         c.topology.count, c.durationSeconds);
            require(ids.insert(e.id).second,
                    sourceName + ".entities." + std::to_string(idx) + ".id",
                    "must be unique");
            c.entities.push_back(std::move(e));
            ++idx;
        }
    }
    if (const json* failures = r.array("failures")) {
        int idx = 0;
        for (const auto& fj : *failures) {
            FailureEntry f = parseFailure(fj, sourceName + ".failures." + std::to_string(idx),
                                          c.topology.count, c.durationSeconds, area);
            if (!c.failures.empty())
                require(f.at >= c.failures.back().at,
                        sourceName + ".failures." + std::to_string(idx) + ".at",
                        "must be sorted by time");
            c.failures.push_back(f);
            ++idx;
        }
    }
    if (const json* o = r.object("outputs"))
        c.outputs = parseOutputs(*o, sourceName + ".outputs");
    r.finish();

    require(!(c.dutyCycle.enabled && c.routing.mode == RoutingMode::LazyBinding),
            sourceName + ".dutyCycle.enabled",
            "duty cycling needs the beacon-fed neighbor view; not available in LazyBinding mode");
    for (std::size_t i = 0; i < c.traffic.flows.size(); ++i) {
        const FlowConfig& f = c.traffic.flows[i];
        if (!f.destEntity)
            continue;
        const bool known = std::any_of(c.entities.begin(), c.entities.end(),
                                       [&](const EntityConfig& e) { return e.id == *f.destEntity; });
        require(known, sourceName + ".traffic.flows." + std::to_string(i) + ".destEntity",
                "references an undeclared entity");
    }
    c.routing.bypassClass = c.maxPriorityClass();
    return c;
}

json pointJson(const Location& loc) {
    return json{{"x", loc.x}, {"y", loc.y}};
}

} // namespace

int ScenarioConfig::maxPriorityClass() const {
    int best = 0;
    for (const auto& f : traffic.flows)
        best = std::max(best, f.priorityClass);
    return best;
}

ScenarioConfig parseConfig(const std::string& jsonText, const std::string& sourceName) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw ConfigError("config error: " + sourceName + ": invalid JSON: " + e.what());
    }
    return parseRoot(j, sourceName);
}

ScenarioConfig loadConfig(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config error: " + path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parseConfig(buf.str(), path);
}

namespace {

// Navigate a dotted path ("routing.setpointSpeed", "traffic.flows.0.periodSeconds")
// to an existing leaf and overwrite it, keeping the leaf's JSON type checked
// downstream by re-validation.
void applyOverride(json& root, const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override error: " + spec + ": expected key.path=value");
    const std::string path = spec.substr(0, eq);
    const std::string valueText = spec.substr(eq + 1);

    json* node = &root;
    std::size_t begin = 0;
    while (begin <= path.size()) {
        const auto dot = path.find('.', begin);
        const std::string part =
            path.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
        if (part.empty())
            throw ConfigError("override error: " + path + ": empty path segment");
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = std::stoul(part);
            } catch (...) {
                throw ConfigError("override error: " + path + ": '" + part +
                                  "' is not an array index");
            }
            if (idx >= node->size())
                throw ConfigError("override error: " + path + ": index " + part +
                                  " out of range");
            node = &(*node)[idx];
        } else if (node->is_object()) {
            if (!node->contains(part))
                throw ConfigError("override error: " + path + ": no such key '" + part + "'");
            node = &(*node)[part];
        } else {
            throw ConfigError("override error: " + path + ": '" + part +
                              "' descends past a scalar");
        }
        if (dot == std::string::npos)
            break;
        begin = dot + 1;
    }
    if (node->is_object() || node->is_array())
        throw ConfigError("override error: " + path + ": refers to a composite value");

    json value;
    try {
        value = json::parse(valueText);
    } catch (...) {
        value = valueText; // unquoted strings (e.g. aggregation.mode=Adaptive)
    }
    if (value.is_object() || value.is_array())
        throw ConfigError("override error: " + path + ": value must be a scalar");
    *node = value;
}

} // namespace

ScenarioConfig parseConfigWithOverrides(const std::string& jsonText,
                                        const std::string& sourceName,
                                        const std::vector<std::string>& overrides) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const json::parse_error& e) {
        throw ConfigError("config error: " + sourceName + ": invalid JSON: " + e.what());
    }
    for (const auto& o : overrides)
        applyOverride(j, o);
    return parseRoot(j, sourceName);
}

std::string configToJson(const ScenarioConfig& c) {
    json j;
    j["schemaVersion"] = c.schemaVersion;
    j["name"] = c.name;
    j["durationSeconds"] = c.durationSeconds;
    j["topology"] = {{"count", c.topology.count},
                     {"width", c.topology.width},
                     {"height", c.topology.height},
                     {"anchorFraction", c.topology.anchorFraction}};
    j["radio"] = {{"rangeMeters", c.radio.rangeMeters},
                  {"bitrateBps", c.radio.bitrateBps},
                  {"lossProbability", c.radio.lossProbability}};
    j["energy"] = {{"initialJoules", c.energy.initialJoules},
                   {"txW", c.energy.rates.txW},
                   {"rxW", c.energy.rates.rxW},
                   {"idleW", c.energy.rates.idleW},
                   {"sleepW", c.energy.rates.sleepW},
                   {"cpuW", c.energy.rates.cpuW},
                   {"cpuPerPacketSeconds", c.energy.cpuPerPacketSeconds}};
    j["mac"] = {{"slotTime", c.mac.slotTime},
                {"cwMin", c.mac.cwMin},
                {"cwMax", c.mac.cwMax},
                {"retryLimit", c.mac.retryLimit},
                {"ackTimeout", c.mac.ackTimeout},
                {"headerBytes", c.mac.headerBytes},
                {"suspicionTimeout", c.mac.suspicionTimeout},
                {"sweepPeriod", c.mac.sweepPeriod}};
    const char* aggMode = "None";
    switch (c.aggregation.mode) {
    case AggregationMode::None: aggMode = "None"; break;
    case AggregationMode::FixedDegree: aggMode = "FixedDegree"; break;
    case AggregationMode::OnDemand: aggMode = "OnDemand"; break;
    case AggregationMode::Adaptive: aggMode = "Adaptive"; break;
    }
    j["aggregation"] = {{"mode", aggMode},
                        {"maxDegree", c.aggregation.maxDegree},
                        {"fixedDegree", c.aggregation.fixedDegree},
                        {"flushTimerSeconds", c.aggregation.flushTimerSeconds},
                        {"guardSeconds", c.aggregation.guardSeconds},
                        {"uLow", c.aggregation.uLow},
                        {"uHigh", c.aggregation.uHigh},
                        {"bufferCapacityUnits", c.aggregation.bufferCapacityUnits}};
    j["scheduler"] = {{"capacity", c.scheduler.capacity}};
    j["routing"] = {{"mode", routingModeName(c.routing.mode)},
                    {"setpointSpeed", c.routing.setpointSpeed},
                    {"weightExponent", c.routing.weightExponent},
                    {"beaconPeriod", c.routing.beaconPeriod},
                    {"neighborTimeout", c.routing.neighborTimeout},
                    {"minDelay", c.routing.minDelay},
                    {"ttl", c.routing.ttl},
                    {"sectorHalfAngleDeg", c.routing.sectorHalfAngleDeg},
                    {"ctsWindow", c.routing.ctsWindow},
                    {"admissionThreshold", c.routing.admissionThreshold},
                    {"backpressureFactor", c.routing.backpressureFactor},
                    {"missAlpha", c.routing.missAlpha}};
    const char* locMethod = "injectedError";
    switch (c.localization.method) {
    case LocalizationMethod::Truth: locMethod = "truth"; break;
    case LocalizationMethod::Centroid: locMethod = "centroid"; break;
    case LocalizationMethod::AreaRefined: locMethod = "areaRefined"; break;
    case LocalizationMethod::InjectedError: locMethod = "injectedError"; break;
    }
    j["localization"] = {{"method", locMethod},
                         {"sigmaMeters", c.localization.sigmaMeters},
                         {"gridResolution", c.localization.gridResolution}};
    j["dutyCycle"] = {{"enabled", c.dutyCycle.enabled},
                      {"startAfter", c.dutyCycle.startAfter},
                      {"checkPeriod", c.dutyCycle.checkPeriod},
                      {"sleepDuration", c.dutyCycle.sleepDuration},
                      {"sensingRadius", c.dutyCycle.sensing.sensingRadius},
                      {"gridResolution", c.dutyCycle.sensing.gridResolution}};
    j["transport"] = {{"staleness", c.transport.staleness},
                      {"rebindRadius", c.transport.rebindRadius},
                      {"reorderCapacity", c.transport.reorderCapacity},
                      {"bindingOracle", c.transport.bindingOracle}};
    json flows = json::array();
    for (const auto& f : c.traffic.flows) {
        json fj;
        fj["name"] = f.name;
        fj["source"] = {{"x", f.source.center.x}, {"y", f.source.center.y},
                        {"radius", f.source.radius}};
        fj["dest"] = {{"x", f.dest.center.x}, {"y", f.dest.center.y},
                      {"radius", f.dest.radius}};
        if (f.destEntity)
            fj["destEntity"] = *f.destEntity;
        if (f.sourceEntity)
            fj["sourceEntity"] = *f.sourceEntity;
        fj["periodSeconds"] = f.periodSeconds;
        fj["payloadBytes"] = f.payloadBytes;
        fj["deadlineOffsetSeconds"] = f.deadlineOffsetSeconds;
        fj["priorityClass"] = f.priorityClass;
        fj["startTime"] = f.startTime;
        fj["stopTime"] = f.stopTime;
        fj["ordered"] = f.ordered;
        flows.push_back(std::move(fj));
    }
    j["traffic"] = {{"flows", std::move(flows)}};
    json entities = json::array();
    for (const auto& e : c.entities) {
        json ej;
        ej["id"] = e.id;
        ej["node"] = e.node;
        json migs = json::array();
        for (const auto& m : e.migrations)
            migs.push_back(json{{"at", m.at}, {"node", m.node}});
        ej["migrations"] = std::move(migs);
        entities.push_back(std::move(ej));
    }
    j["entities"] = std::move(entities);
    json failures = json::array();
    for (const auto& f : c.failures) {
        json fj;
        fj["at"] = f.at;
        fj["node"] = f.node;
        switch (f.kind) {
        case FailureKind::Crash: fj["kind"] = "crash"; break;
        case FailureKind::SleepForce: fj["kind"] = "sleep"; break;
        case FailureKind::Recover: fj["kind"] = "recover"; break;
        case FailureKind::MoveTo:
            fj["kind"] = "moveTo";
            fj["to"] = pointJson(f.to);
            break;
        }
        failures.push_back(std::move(fj));
    }
    j["failures"] = std::move(failures);
    j["outputs"] = {{"timeseries", c.outputs.timeseries},
                    {"packetTrace", c.outputs.packetTrace},
                    {"sampleInterval", c.outputs.sampleInterval}};
    return j.dump(2) + "\n";
}

} // namespace wsn
