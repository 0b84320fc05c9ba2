#include "wsn/harness/simulation.hpp"

#include "wsn/aida/policy.hpp"
#include "wsn/aida/pool.hpp"
#include "wsn/energy/coverage.hpp"
#include "wsn/energy/ledger.hpp"
#include "wsn/loc/localization.hpp"
#include "wsn/mac/engine.hpp"
#include "wsn/routing/neighbor.hpp"
#include "wsn/routing/select.hpp"
#include "wsn/sched/queue.hpp"
#include "wsn/sim/topology.hpp"
#include "wsn/util/assert.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wsn {

namespace {

std::string streamName(const char* prefix, NodeId id) {
    return std::string(prefix) + "/" + std::to_string(id);
}

} // namespace

// ---------------------------------------------------------------------------
// Per-node state: the full protocol stack plus the glue between layers.

struct Simulation::Node final : MacClient {
    Simulation& sim;
    const ScenarioConfig& cfg;
    NodeId id;
    bool isAnchor = false;
    Location truth;
    std::optional<LocationEstimate> estimate;

    bool aliveFlag = true;
    bool awakeFlag = true;
    bool deathPending = false;

    EnergyLedger ledger;
    SimTime lastSettle = 0.0;
    SimTime sleepStart = 0.0;

    RngStream routingRng;
    RngStream locRng;
    RngStream dutyRng;

    std::unique_ptr<MacEngine> mac;
    VelocityQueue sched;
    AggregationPool pool;
    NeighborTable table;
    Ewma localMiss;
    int lastTarget = 1;

    // Lazy-binding prober state: one outstanding probe blocks the data pump.
    struct PendingBind {
        PacketPtr packet;
        std::uint64_t probeId = 0;
        std::uint64_t prevProbeId = 0; // still honoured after a re-probe
        int attempts = 1;
    };
    std::optional<PendingBind> pendingBind;
    std::uint32_t probeSeq = 0;
    EventHandle bindTimeout;

    // Lazy-binding responder state, keyed by probe id.
    struct PendingResponse {
        NodeId prober = kNoNode;
        EventHandle event;
        bool deferred = false;      // waiting for the medium to free up
        SimTime expiresAt = 0.0;    // past the prober's window; stop trying
    };
    std::map<std::uint64_t, PendingResponse> pendingResponses;

    // Random term added to the progress-shaped response timer. Without it two
    // responders hidden from each other with near-equal progress collide at
    // the prober on every attempt, turning one bad geometry into a permanent
    // void; the jitter decorrelates the retry.
    double responseJitterWindow() const { return cfg.routing.ctsWindow; }

    // Full span of a probe's contention round, as seen from the probe's end of
    // transmission: latest responder fire time plus the response airtime.
    double responseWindow() const {
        return cfg.routing.ctsWindow + responseJitterWindow() +
               cfg.radio.airtimeSeconds(cfg.mac.headerBytes + kResponseBodyBytes);
    }

    // Rough duration of the data+ack exchange that follows a winning response;
    // bystanders hold off that long so the hand-off is not trampled.
    double dataExchangeNav() const {
        int payload = 0;
        for (const auto& f : cfg.traffic.flows)
            payload = std::max(payload, f.payloadBytes);
        const double dataAir = cfg.radio.airtimeSeconds(
            cfg.mac.headerBytes + kPerUnitLengthFieldBytes + payload);
        const double ackAir = cfg.radio.airtimeSeconds(cfg.mac.headerBytes);
        return 4.0 * cfg.mac.slotTime + dataAir + ackAir;
    }

    EventHandle beaconEvent;
    EventHandle dutyEvent;
    EventHandle wakeEvent;
    EventHandle aidaTimer;

    Node(Simulation& s, NodeId nodeId, const Location& pos, std::uint64_t seed)
        : sim(s), cfg(s.config_), id(nodeId), truth(pos),
          ledger(s.config_.energy.initialJoules, s.config_.energy.rates),
          routingRng(seed, streamName("routing", nodeId)),
          locRng(seed, streamName("loc", nodeId)),
          dutyRng(seed, streamName("duty", nodeId)), sched(s.config_.scheduler),
          pool(s.config_.aggregation), localMiss(s.config_.routing.missAlpha) {}

    SimTime now() const { return sim.queue_.now(); }
    const Location& pos() const { return estimate->position; }
    bool up() const { return aliveFlag && awakeFlag; }

    // ---- energy ----------------------------------------------------------

    void settlePower(SimTime t) {
        if (!aliveFlag)
            return;
        const double elapsed = t - lastSettle;
        if (elapsed > 0.0)
            ledger.consume(awakeFlag ? Activity::Idle : Activity::Sleep, elapsed);
        lastSettle = t;
    }

    // Energy spent up to t without mutating the ledger (timeseries sampling).
    double energyUsedAt(SimTime t) const {
        double used = ledger.totalConsumed();
        if (aliveFlag && t > lastSettle)
            used += (t - lastSettle) *
                    ledger.rates().rate(awakeFlag ? Activity::Idle : Activity::Sleep);
        return used;
    }

    void maybeDie(SimTime t) {
        if (!aliveFlag || deathPending || !ledger.depleted())
            return;
        // Defer teardown to its own event: death inside a MAC or channel
        // callback would yank structures out from under the caller.
        deathPending = true;
        sim.queue_.schedule(t, id, "energy", "depleted", [this](SimTime tt) {
            ++sim.metrics_.energy.deadNodes;
            crash(tt);
        });
    }

    void chargeCpu(SimTime t) {
        settlePower(t);
        ledger.consume(Activity::Cpu, cfg.energy.cpuPerPacketSeconds);
        maybeDie(t);
    }

    void chargeRx(double airtime, SimTime t) {
        settlePower(t);
        ledger.consume(Activity::Rx, airtime);
        maybeDie(t);
    }

    // ---- frame builders ---------------------------------------------------

    Frame makeDataFrame(AidaFrameData data) {
        Frame f;
        f.kind = FrameKind::Data;
        f.src = id;
        f.dst = data.key.nextHop;
        f.frameId = mac->nextFrameId();
        f.sizeBytes = cfg.mac.headerBytes + frameBodyBytes(FrameKind::Data, &data);
        f.truthReceived = std::make_shared<bool>(false);
        f.body = std::move(data);
        return f;
    }

    Frame makeControlFrame(FrameKind kind, NodeId dst) {
        Frame f;
        f.kind = kind;
        f.src = id;
        f.dst = dst;
        f.frameId = mac->nextFrameId();
        f.sizeBytes = cfg.mac.headerBytes + frameBodyBytes(kind, nullptr);
        return f;
    }

    // ---- pipeline: scheduler -> routing -> aggregation -> MAC -------------

    void kick(SimTime t) {
        if (up() && mac->enabled() && mac->pipelineIdle())
            pump(t);
    }

    bool onMacIdle(SimTime t) override { return pump(t); }

    bool pump(SimTime t) {
        if (!up() || pendingBind)
            return false;
        bool submitted = false;
        const double u = mac->channelUtilization(t);
        lastTarget = selectDegree(u, std::max<int>(static_cast<int>(sched.size()), 1),
                                  cfg.aggregation, pool.adaptiveTarget());
        std::vector<PacketPtr> expired;
        for (int pulled = 0; pulled < lastTarget; ++pulled) {
            expired.clear();
            auto next = sched.dequeue(t, pos(), expired);
            for (const auto& e : expired) {
                sim.dropPacket(e, DropReason::Expired, t);
                localMiss.observe(1.0);
            }
            if (!next)
                break;
            PacketPtr p = *next;
            if (p->ttlRemaining <= 0) {
                sim.dropPacket(p, DropReason::TtlExhausted, t);
                continue;
            }
            if (cfg.routing.mode == RoutingMode::LazyBinding) {
                startProbe(p, t);
                submitted = true;
                break; // handshake outstanding; pump blocked until bound
            }
            const auto cands = candidateSet(
                pos(), p->dest, table.usable(),
                [this](NodeId n) { return mac->linkStats().delaySeconds(n); },
                cfg.routing.minDelay);
            const ForwardDecision d = cfg.routing.mode == RoutingMode::Greedy
                                          ? greedyNextHop(cands)
                                          : selectNextHop(cands, cfg.routing, routingRng);
            switch (d.action) {
            case ForwardDecision::Action::Void:
                sim.dropPacket(p, DropReason::Void, t);
                break;
            case ForwardDecision::Action::Drop:
                sim.dropPacket(p, DropReason::CongestionFeedback, t);
                sendBackpressure(t);
                submitted = true;
                break;
            case ForwardDecision::Action::Forward:
                --p->ttlRemaining;
                submitted |= bufferUnit(p, d.nextHop, t);
                break;
            }
        }
        rearmAidaTimer(t);
        return submitted;
    }

    bool bufferUnit(const PacketPtr& p, NodeId nextHop, SimTime t) {
        AidaUnit u;
        u.packet = p;
        u.sizeBytes = kPacketHeaderBytes + p->payloadBytes;
        u.priorityClass = p->priorityClass;
        u.slackSeconds = p->deadline - t -
                         distance(pos(), p->dest.center) / cfg.routing.setpointSpeed;
        u.nextHop = nextHop;
        u.enqueuedAt = t;
        const AidaKey key{nextHop, p->priorityClass};
        auto res = pool.enqueueUnit(std::move(u), t, lastTarget);
        for (const auto& ev : res.evicted)
            sim.dropPacket(ev.packet, DropReason::AidaOverflow, t);
        if (res.flushNow)
            return flushKey(key, t);
        return false;
    }

    bool flushKey(const AidaKey& key, SimTime t) {
        AidaFrameData data = pool.flush(key, t, std::max(1, lastTarget));
        if (data.units.empty())
            return false;
        const int degree = data.degree();
        ++sim.metrics_.aggregation.framesFlushed;
        ++sim.metrics_.aggregation.degreeHistogram[degree];
        sim.metrics_.aggregation.bytesSaved +=
            static_cast<std::uint64_t>(degree - 1) * cfg.mac.headerBytes;
        mac->submitData(makeDataFrame(std::move(data)));
        return true;
    }

    void rearmAidaTimer(SimTime t) {
        sim.queue_.cancel(aidaTimer);
        aidaTimer.reset();
        if (!up())
            return;
        if (const auto at = pool.nextTimerAt())
            aidaTimer = sim.queue_.schedule(std::max(*at, t), id, "aida", "flush",
                                            [this](SimTime tt) { aidaTimerFired(tt); });
    }

    void aidaTimerFired(SimTime t) {
        aidaTimer.reset();
        if (!up())
            return;
        // Hold bounds are hard: expired buffers go to the MAC queue even while
        // it is busy; queueing is bounded by the pool capacity.
        for (const AidaKey& key : pool.dueKeys(t))
            flushKey(key, t);
        rearmAidaTimer(t);
    }

    // ---- packet arrival ----------------------------------------------------

    void receivePacket(const PacketPtr& p, SimTime t) {
        chargeCpu(t);
        p->hopTrace.push_back({id, t});
        if (!handleArrival(p, t))
            enqueueForRouting(p, t);
    }

    // True when the packet terminated here (delivered or dropped).
    bool handleArrival(const PacketPtr& p, SimTime t) {
        if (!estimate)
            return false;
        if (distance(pos(), p->dest.center) > p->dest.radiusMeters)
            return false;
        if (p->dstEntity == 0) {
            sim.deliverToApp(p, *this, t); // geographic: any node in the region
            return true;
        }
        const auto cur = sim.directory_.current(p->dstEntity);
        WSN_ASSERT(cur.has_value(), "entity packet without a registration");
        if (cur->node == id) {
            sim.deliverToApp(p, *this, t);
            return true;
        }
        if (cur->version > p->boundVersion) {
            // The entity moved since the sender bound the address. Nodes near
            // the stale location act as handover agents while the pointer is
            // fresh; afterwards the packet is undeliverable.
            if (p->rebindCount < 1 &&
                timeAtOrBefore(t, cur->at + cfg.transport.staleness)) {
                p->dest.center = cur->location;
                p->boundVersion = cur->version;
                ++p->rebindCount;
                ++sim.metrics_.transport.rebinds;
                return false; // forward under the new address
            }
            sim.dropPacket(p, DropReason::StaleBinding, t);
            return true;
        }
        return false; // current version, host deeper inside the region
    }

    void enqueueForRouting(const PacketPtr& p, SimTime t) {
        if (!estimate) {
            sim.dropPacket(p, DropReason::Void, t);
            return;
        }
        auto res = sched.enqueue(p, t, pos());
        switch (res.outcome) {
        case VelocityQueue::EnqueueOutcome::ExpiredOnArrival:
            sim.dropPacket(p, DropReason::Expired, t);
            localMiss.observe(1.0);
            return;
        case VelocityQueue::EnqueueOutcome::AcceptedWithEviction:
            sim.dropPacket(res.evicted, DropReason::SchedulerEvicted, t);
            break;
        case VelocityQueue::EnqueueOutcome::Accepted:
            break;
        }
        kick(t);
    }

    // ---- MAC upcalls -------------------------------------------------------

    void onMacFrame(const Frame& frame, bool addressedToMe, SimTime t) override {
        switch (frame.kind) {
        case FrameKind::Data:
            // The round that bound us just concluded; our own forwarding (and
            // the ack already on the air) must not wait out the stale window.
            mac->releaseNav();
            for (const auto& unit : frame.data().units)
                receivePacket(unit.packet, t);
            break;
        case FrameKind::Beacon:
            if (cfg.routing.mode != RoutingMode::LazyBinding) {
                const auto& b = std::get<BeaconBody>(frame.body);
                table.upsert(frame.src, b.location, b.missRatio, t);
            }
            break;
        case FrameKind::Probe:
            // Keep our queued traffic out of the prober's contention round;
            // responses go out via sendImmediate and are exempt.
            mac->deferUntil(t + responseWindow());
            maybeScheduleResponse(frame.src, std::get<ProbeBody>(frame.body), t);
            break;
        case FrameKind::Response: {
            const auto& r = std::get<ResponseBody>(frame.body);
            if (addressedToMe) {
                completeBind(frame.src, r, t);
            } else {
                suppressResponse(r.probeId);
                // The winner is about to receive the data; stay off the air
                // for the hand-off (we are inside the winner's range).
                mac->deferUntil(t + dataExchangeNav());
            }
            break;
        }
        case FrameKind::Backpressure: {
            auto& ls = mac->linkStats();
            if (!ls.delaySeconds(frame.src))
                ls.observeDelay(frame.src, cfg.routing.minDelay);
            ls.inflateDelay(frame.src, cfg.routing.backpressureFactor);
            break;
        }
        case FrameKind::Ack:
            break; // consumed inside the MAC
        }
    }

    void onDataDone(const Frame& frame, const MacDataResult& result, SimTime t) override {
        switch (result.status) {
        case MacDataResult::Status::Delivered:
            for (const auto& unit : frame.data().units)
                localMiss.observe(0.0);
            break;
        case MacDataResult::Status::FalseFailure:
            break; // the copy moved on; the units are owned downstream
        case MacDataResult::Status::RetriesExhausted:
        case MacDataResult::Status::NoReceiver:
            if (cfg.routing.mode != RoutingMode::LazyBinding)
                table.suspect(frame.dst);
            for (const auto& unit : frame.data().units)
                sim.dropPacket(unit.packet, DropReason::MacFailure, t);
            break;
        }
    }

    void onControlSent(const Frame& frame, SimTime t) override {
        if (frame.kind == FrameKind::Probe && pendingBind &&
            std::get<ProbeBody>(frame.body).probeId == pendingBind->probeId) {
            const SimTime at = t + responseWindow() + 2.0 * cfg.mac.slotTime;
            // Our own queue stays quiet too: a queued flush would jam the very
            // responses we are waiting for.
            mac->deferUntil(t + responseWindow());
            bindTimeout = sim.queue_.schedule(at, id, "routing", "bindTimeout",
                                              [this](SimTime tt) { bindTimeoutFired(tt); });
        }
    }

    void onNeighborSuspected(NodeId neighbor, SimTime t) override {
        if (cfg.routing.mode != RoutingMode::LazyBinding)
            table.suspect(neighbor);
        (void)t;
    }

    void onTxEnergy(double airtimeSeconds, SimTime t) override {
        settlePower(t);
        ledger.consume(Activity::Tx, airtimeSeconds);
        maybeDie(t);
    }

    void onChannelIdle(SimTime t) override {
        for (auto& [probeId, r] : pendingResponses) {
            if (!r.deferred)
                continue;
            r.deferred = false;
            // Stagger the retries: every deferred responder hears the same idle
            // transition, and firing them all one slot later would collide.
            const SimTime at =
                t + cfg.mac.slotTime + routingRng.uniform(0.0, 4.0 * cfg.mac.slotTime);
            const std::uint64_t pid = probeId;
            r.event = sim.queue_.schedule(at, id, "routing", "responseRetry",
                                          [this, pid](SimTime tt) { fireResponse(pid, tt); });
        }
    }

    // ---- beacons and backpressure ------------------------------------------

    void scheduleBeacon(SimTime at) {
        beaconEvent = sim.queue_.schedule(at, id, "routing", "beacon",
                                          [this](SimTime t) { beaconTick(t); });
    }

    void beaconTick(SimTime t) {
        if (!up() || !mac->enabled() || !estimate)
            return;
        Frame f = makeControlFrame(FrameKind::Beacon, kBroadcast);
        f.body = BeaconBody{pos(), localMiss.valueOr(0.0)};
        sim.countControl(f);
        mac->submitControl(std::move(f));
        table.evictStale(t, cfg.routing.neighborTimeout);
        scheduleBeacon(t + cfg.routing.beaconPeriod);
    }

    void sendBackpressure(SimTime t) {
        (void)t;
        Frame f = makeControlFrame(FrameKind::Backpressure, kBroadcast);
        sim.countControl(f);
        mac->submitControl(std::move(f));
    }

    // ---- lazy binding -------------------------------------------------------

    void startProbe(const PacketPtr& p, SimTime t) {
        pendingBind = PendingBind{p, (static_cast<std::uint64_t>(id) << 32) | ++probeSeq, 1};
        submitProbe(t);
    }

    void submitProbe(SimTime t) {
        (void)t;
        Frame f = makeControlFrame(FrameKind::Probe, kBroadcast);
        f.body = ProbeBody{pendingBind->probeId, pos(), pendingBind->packet->dest.center};
        sim.countControl(f);
        mac->submitControl(std::move(f));
    }

    void bindTimeoutFired(SimTime t) {
        bindTimeout.reset();
        if (!pendingBind || !up())
            return;
        if (pendingBind->attempts >= 2) {
            sim.dropPacket(pendingBind->packet, DropReason::Void, t);
            pendingBind.reset();
            kick(t);
            return;
        }
        ++pendingBind->attempts;
        pendingBind->prevProbeId = pendingBind->probeId;
        pendingBind->probeId = (static_cast<std::uint64_t>(id) << 32) | ++probeSeq;
        submitProbe(t);
    }

    void completeBind(NodeId responder, const ResponseBody& body, SimTime t) {
        if (!pendingBind)
            return;
        // A straggler from our previous round is as good a relay as any.
        if (body.probeId != pendingBind->probeId && body.probeId != pendingBind->prevProbeId)
            return;
        sim.queue_.cancel(bindTimeout);
        bindTimeout.reset();
        mac->releaseNav(); // our round is over; ship the data now
        PacketPtr p = pendingBind->packet;
        pendingBind.reset();
        --p->ttlRemaining;
        bufferUnit(p, responder, t);
        rearmAidaTimer(t);
        kick(t);
    }

    void maybeScheduleResponse(NodeId prober, const ProbeBody& body, SimTime t) {
        if (!up() || !estimate || pendingResponses.count(body.probeId))
            return;
        // A fresh probe supersedes whatever we still owed this prober: letting a
        // stale response fire mid-round just collides with the new contenders.
        for (auto it = pendingResponses.begin(); it != pendingResponses.end();) {
            if (it->second.prober == prober) {
                sim.queue_.cancel(it->second.event);
                it = pendingResponses.erase(it);
            } else {
                ++it;
            }
        }
        if (!inSector(body.origin, body.destCenter, pos(), cfg.routing.sectorHalfAngleDeg))
            return;
        const double progress =
            distance(body.origin, body.destCenter) - distance(pos(), body.destCenter);
        if (progress <= 0.0)
            return;
        const double wait =
            responderDelay(progress, cfg.radio.rangeMeters, cfg.routing.ctsWindow) +
            routingRng.uniform(0.0, responseJitterWindow());
        PendingResponse r;
        r.prober = prober;
        r.expiresAt = t + cfg.routing.ctsWindow + responseJitterWindow() +
                      2.0 * cfg.mac.slotTime;
        const std::uint64_t pid = body.probeId;
        r.event = sim.queue_.schedule(t + wait, id, "routing", "response",
                                      [this, pid](SimTime tt) { fireResponse(pid, tt); });
        pendingResponses.emplace(pid, std::move(r));
    }

    void fireResponse(std::uint64_t probeId, SimTime t) {
        auto it = pendingResponses.find(probeId);
        if (it == pendingResponses.end())
            return;
        if (!up() || timeBefore(it->second.expiresAt, t)) {
            pendingResponses.erase(it); // too late to matter to the prober
            return;
        }
        if (!mac->mediumFree()) {
            it->second.deferred = true; // retry one slot after the channel frees
            return;
        }
        Frame f = makeControlFrame(FrameKind::Response, it->second.prober);
        f.body = ResponseBody{probeId, pos()};
        sim.countControl(f);
        mac->sendImmediate(f);
        pendingResponses.erase(it);
    }

    void suppressResponse(std::uint64_t probeId) {
        auto it = pendingResponses.find(probeId);
        if (it == pendingResponses.end())
            return;
        sim.queue_.cancel(it->second.event);
        pendingResponses.erase(it);
    }

    // ---- duty cycle ----------------------------------------------------------

    void scheduleDutyCheck(SimTime at) {
        dutyEvent = sim.queue_.schedule(at, id, "duty", "check",
                                        [this](SimTime t) { dutyCheck(t); });
    }

    void dutyCheck(SimTime t) {
        if (!aliveFlag || !awakeFlag)
            return; // wake path reschedules
        const bool drained = mac->pipelineIdle() && sched.empty() && pool.empty() &&
                             !pendingBind && pendingResponses.empty();
        if (drained && coverageRedundantNow(t)) {
            goSleep(t, false);
            wakeEvent = sim.queue_.schedule(t + cfg.dutyCycle.sleepDuration, id, "duty",
                                            "wake", [this](SimTime tt) { wakeUp(tt); });
            return;
        }
        scheduleDutyCheck(t + cfg.dutyCycle.checkPeriod);
    }

    bool coverageRedundantNow(SimTime t) const {
        if (!estimate)
            return false;
        std::vector<Location> fresh;
        for (const auto& [nid, e] : table.entries())
            if (!e.suspected && t - e.lastBeacon <= cfg.routing.neighborTimeout)
                fresh.push_back(e.location);
        return coverageRedundant(pos(), fresh, cfg.dutyCycle.sensing);
    }

    void goSleep(SimTime t, bool forced) {
        if (!aliveFlag || !awakeFlag)
            return;
        settlePower(t);
        if (forced) {
            for (const Frame& f : mac->shutdown())
                for (const auto& unit : f.data().units)
                    sim.dropPacket(unit.packet, DropReason::NodeFailure, t);
            if (pendingBind) {
                sim.dropPacket(pendingBind->packet, DropReason::NodeFailure, t);
                pendingBind.reset();
            }
            cancelHandshakeEvents();
        } else {
            mac->setEnabled(false);
        }
        awakeFlag = false;
        sleepStart = t;
        ++sim.metrics_.dutyCycle.sleepEvents;
        sim.queue_.cancel(beaconEvent);
        beaconEvent.reset();
        sim.queue_.cancel(aidaTimer);
        aidaTimer.reset();
    }

    void wakeUp(SimTime t) {
        wakeEvent.reset();
        if (!aliveFlag || awakeFlag)
            return;
        settlePower(t); // accrues the sleep interval at the sleep rate
        sim.metrics_.dutyCycle.sleepSeconds += t - sleepStart;
        awakeFlag = true;
        mac->setEnabled(true);
        if (cfg.routing.mode != RoutingMode::LazyBinding && estimate)
            scheduleBeacon(t + routingRng.uniform(0.0, cfg.routing.beaconPeriod));
        if (cfg.dutyCycle.enabled)
            scheduleDutyCheck(t + cfg.dutyCycle.checkPeriod);
        rearmAidaTimer(t);
        kick(t);
    }

    // ---- teardown --------------------------------------------------------------

    void cancelHandshakeEvents() {
        sim.queue_.cancel(bindTimeout);
        bindTimeout.reset();
        for (auto& [pid, r] : pendingResponses)
            sim.queue_.cancel(r.event);
        pendingResponses.clear();
    }

    void crash(SimTime t) {
        if (!aliveFlag)
            return;
        settlePower(t);
        if (!awakeFlag)
            sim.metrics_.dutyCycle.sleepSeconds += t - sleepStart;
        aliveFlag = false;
        awakeFlag = false;
        for (const Frame& f : mac->shutdown())
            for (const auto& unit : f.data().units)
                sim.dropPacket(unit.packet, DropReason::NodeFailure, t);
        for (const auto& p : sched.drainAll())
            sim.dropPacket(p, DropReason::NodeFailure, t);
        for (const auto& unit : pool.drainAll())
            sim.dropPacket(unit.packet, DropReason::NodeFailure, t);
        if (pendingBind) {
            sim.dropPacket(pendingBind->packet, DropReason::NodeFailure, t);
            pendingBind.reset();
        }
        cancelHandshakeEvents();
        for (auto* h : {&beaconEvent, &dutyEvent, &wakeEvent, &aidaTimer}) {
            sim.queue_.cancel(*h);
            h->reset();
        }
        sim.onNodeCrashed(id, t);
    }
};

// ---------------------------------------------------------------------------
// Simulation

Simulation::Simulation(ScenarioConfig config, std::uint64_t seed)
    : config_(std::move(config)), seed_(seed) {
    metrics_.scenarioName = config_.name;
    metrics_.seed = seed_;
    metrics_.durationSeconds = config_.durationSeconds;
    flowSeq_.assign(config_.traffic.flows.size(), 0);

    buildNodes();
    bootstrapLocalization();
    registerEntities();

    // Channel loss draws must not depend on node construction order.
    channel_ = std::make_unique<Channel>(queue_, *this, config_.radio,
                                         RngStream(seed_, "channel"));
    channel_->setRxEnergyHook([this](NodeId node, double airtime, SimTime now) {
        nodes_[node]->chargeRx(airtime, now);
    });
    for (auto& n : nodes_)
        n->mac = std::make_unique<MacEngine>(
            n->id, config_.mac, queue_, *channel_,
            RngStream(seed_, streamName("mac", n->id)), 0.3, 1.0, *n);

    if (config_.routing.mode != RoutingMode::LazyBinding)
        for (auto& n : nodes_)
            if (n->estimate)
                n->scheduleBeacon(n->routingRng.uniform(0.0, config_.routing.beaconPeriod));
    if (config_.dutyCycle.enabled)
        for (auto& n : nodes_)
            n->scheduleDutyCheck(config_.dutyCycle.startAfter +
                                 n->dutyRng.uniform(0.0, config_.dutyCycle.checkPeriod));

    scheduleTraffic();
    scheduleFailures();
    scheduleSampling();
}

Simulation::~Simulation() = default;

std::size_t Simulation::nodeCount() const { return nodes_.size(); }
bool Simulation::alive(NodeId node) const { return nodes_[node]->aliveFlag; }
bool Simulation::awake(NodeId node) const {
    return nodes_[node]->aliveFlag && nodes_[node]->awakeFlag;
}
Location Simulation::position(NodeId node) const { return nodes_[node]->truth; }

Location Simulation::truthPosition(NodeId node) const { return nodes_[node]->truth; }
bool Simulation::localized(NodeId node) const { return nodes_[node]->estimate.has_value(); }
Location Simulation::estimatedPosition(NodeId node) const {
    return nodes_[node]->estimate->position;
}

void Simulation::buildNodes() {
    RngStream topoRng(seed_, "topology");
    const auto positions = generateTopology(static_cast<std::size_t>(config_.topology.count),
                                            config_.area(), topoRng);
    nodes_.reserve(positions.size());
    for (NodeId i = 0; i < positions.size(); ++i)
        nodes_.push_back(std::make_unique<Node>(*this, i, positions[i], seed_));
    const int anchors = static_cast<int>(
        std::lround(config_.topology.anchorFraction * config_.topology.count));
    for (int i = 0; i < anchors && i < config_.topology.count; ++i)
        nodes_[i]->isAnchor = true;
}

void Simulation::localizeNode(NodeId id) {
    Node& n = *nodes_[id];
    if (n.isAnchor) {
        n.estimate = LocationEstimate{n.truth, {id}, LocationMethod::Truth, 0.0};
        return;
    }
    std::vector<AnchorBeacon> heard;
    for (const auto& a : nodes_)
        if (a->isAnchor && inRange(n.truth, a->truth, config_.radio.rangeMeters))
            heard.push_back({a->id, a->truth});

    switch (config_.localization.method) {
    case LocalizationMethod::Truth: {
        LocationEstimate est{n.truth, {}, LocationMethod::Truth, 0.0};
        for (const auto& b : heard)
            est.heardAnchors.push_back(b.anchorId);
        n.estimate = est;
        break;
    }
    case LocalizationMethod::Centroid:
        n.estimate = centroidEstimate(heard);
        break;
    case LocalizationMethod::AreaRefined: {
        std::vector<AnchorBeacon> neighborHeard;
        for (const auto& nb : nodes_) {
            if (nb->id == id || !inRange(n.truth, nb->truth, config_.radio.rangeMeters))
                continue;
            for (const auto& a : nodes_)
                if (a->isAnchor && inRange(nb->truth, a->truth, config_.radio.rangeMeters))
                    neighborHeard.push_back({a->id, a->truth});
        }
        n.estimate = areaRefine(heard, neighborHeard, config_.radio.rangeMeters,
                                config_.area(), config_.localization.gridResolution);
        break;
    }
    case LocalizationMethod::InjectedError: {
        LocationEstimate est = injectError(n.truth, config_.localization.sigmaMeters,
                                           config_.area(), n.locRng);
        for (const auto& b : heard)
            est.heardAnchors.push_back(b.anchorId);
        n.estimate = est;
        break;
    }
    }
}

void Simulation::bootstrapLocalization() {
    // Init-time oracle exchange: anchors announce once, losslessly and with
    // zero airtime, so localization never perturbs the runtime traffic or the
    // control-overhead accounting.
    for (auto& n : nodes_)
        localizeNode(n->id);
    std::vector<double> errors;
    for (const auto& n : nodes_) {
        if (n->isAnchor)
            continue;
        ++metrics_.localization.total;
        if (!n->estimate)
            continue;
        ++metrics_.localization.localized;
        errors.push_back(distance(n->estimate->position, n->truth));
    }
    if (!errors.empty()) {
        std::sort(errors.begin(), errors.end());
        double sum = 0.0;
        for (double e : errors)
            sum += e;
        metrics_.localization.meanErrorM = sum / static_cast<double>(errors.size());
        metrics_.localization.p95ErrorM = percentileNearestRank(errors, 0.95);
    }
}

void Simulation::registerEntities() {
    for (const auto& e : config_.entities) {
        directory_.registerEntity(e.id, e.node, nodes_[e.node]->truth, 0.0);
        for (const auto& m : e.migrations) {
            const EntityId eid = e.id;
            const NodeId target = m.node;
            queue_.schedule(m.at, target, "transport", "migrate",
                            [this, eid, target](SimTime now) {
                                directory_.migrate(eid, target, nodes_[target]->truth, now);
                            });
        }
    }
}

void Simulation::scheduleTraffic() {
    for (std::size_t i = 0; i < config_.traffic.flows.size(); ++i) {
        const FlowConfig& f = config_.traffic.flows[i];
        const SimTime stop = f.stopTime == 0.0 ? config_.durationSeconds : f.stopTime;
        if (f.sourceEntity) {
            RngStream jitter(seed_, "traffic/" + std::to_string(i) + "/entity");
            const SimTime first = f.startTime + jitter.uniform(0.0, f.periodSeconds);
            if (timeBefore(first, stop))
                queue_.schedule(first, kNoNode, "traffic", "gen",
                                [this, i](SimTime now) { flowFire(i, kNoNode, now); });
            continue;
        }
        std::vector<NodeId> sources;
        for (const auto& n : nodes_)
            if (distance(n->truth, f.source.center) <= f.source.radius)
                sources.push_back(n->id);
        if (sources.empty()) {
            NodeId best = 0;
            for (const auto& n : nodes_)
                if (distance(n->truth, f.source.center) <
                    distance(nodes_[best]->truth, f.source.center))
                    best = n->id;
            sources.push_back(best);
        }
        for (NodeId s : sources) {
            RngStream jitter(seed_,
                             "traffic/" + std::to_string(i) + "/" + std::to_string(s));
            const SimTime first = f.startTime + jitter.uniform(0.0, f.periodSeconds);
            if (timeBefore(first, stop))
                queue_.schedule(first, s, "traffic", "gen",
                                [this, i, s](SimTime now) { flowFire(i, s, now); });
        }
    }
}

void Simulation::flowFire(std::size_t flowIdx, NodeId fixedSource, SimTime now) {
    const FlowConfig& f = config_.traffic.flows[flowIdx];
    NodeId source = fixedSource;
    if (f.sourceEntity) {
        const auto cur = directory_.current(*f.sourceEntity);
        WSN_ASSERT(cur.has_value(), "flow from an unregistered entity");
        source = cur->node;
    }
    originate(source, flowIdx, now);
    const SimTime stop = f.stopTime == 0.0 ? config_.durationSeconds : f.stopTime;
    const SimTime next = now + f.periodSeconds;
    if (timeBefore(next, stop))
        queue_.schedule(next, fixedSource, "traffic", "gen",
                        [this, flowIdx, fixedSource](SimTime t) {
                            flowFire(flowIdx, fixedSource, t);
                        });
}

void Simulation::originate(NodeId source, std::size_t flowIdx, SimTime now) {
    Node& n = *nodes_[source];
    if (!n.up())
        return; // a dead or sleeping node does not sense or send
    const FlowConfig& f = config_.traffic.flows[flowIdx];

    ++metrics_.generated;
    ++metrics_.byClass[f.priorityClass].generated;

    auto p = std::make_shared<Packet>();
    p->id = ++packetSeq_;
    p->source = f.sourceEntity.value_or(0);
    p->deadline = now + f.deadlineOffsetSeconds;
    p->priorityClass = f.priorityClass;
    p->payloadBytes = f.payloadBytes;
    p->createdAt = now;
    p->ttlRemaining = config_.routing.ttl;
    p->hopTrace.push_back({source, now});

    n.chargeCpu(now);
    if (!n.estimate) {
        dropPacket(p, DropReason::Unresolvable, now);
        return;
    }
    if (f.destEntity) {
        const double lag = config_.transport.bindingOracle ? 0.0 : config_.transport.staleness;
        const auto view = directory_.senderView(*f.destEntity, now, lag);
        if (!view) {
            dropPacket(p, DropReason::Unresolvable, now);
            return;
        }
        p->dest.center = view->location;
        p->dest.radiusMeters = config_.transport.rebindRadius;
        p->dest.entity = *f.destEntity;
        p->dstEntity = *f.destEntity;
        p->boundVersion = view->version;
    } else {
        p->dest.center = f.dest.center;
        p->dest.radiusMeters = f.dest.radius;
    }
    if (config_.routing.mode == RoutingMode::TableDriven &&
        !admitPacket(n.mac->channelUtilization(now), p->priorityClass, config_.routing)) {
        dropPacket(p, DropReason::Policed, now);
        return;
    }
    if (f.ordered)
        p->connectionSeq = ++flowSeq_[flowIdx];
    if (!n.handleArrival(p, now))
        n.enqueueForRouting(p, now);
}

void Simulation::scheduleFailures() {
    for (const auto& entry : config_.failures)
        queue_.schedule(entry.at, entry.node, "failure", "apply",
                        [this, entry](SimTime now) { applyFailure(entry, now); });
}

void Simulation::applyFailure(const FailureEntry& entry, SimTime now) {
    Node& n = *nodes_[entry.node];
    switch (entry.kind) {
    case FailureKind::Crash:
        n.crash(now);
        break;
    case FailureKind::SleepForce:
        n.goSleep(now, true);
        break;
    case FailureKind::Recover:
        n.wakeUp(now);
        break;
    case FailureKind::MoveTo:
        if (n.aliveFlag) {
            n.truth = entry.to;
            localizeNode(entry.node);
        }
        break;
    }
}

void Simulation::onNodeCrashed(NodeId id, SimTime now) {
    // Reorder holds live with the destination entity; an entity bound to a
    // crashed host loses them.
    for (const auto& e : config_.entities) {
        const auto cur = directory_.current(e.id);
        if (!cur || cur->node != id)
            continue;
        for (auto it = reorder_.begin(); it != reorder_.end();) {
            if (it->first.second == e.id) {
                for (const auto& p : it->second.heldPackets())
                    dropPacket(p, DropReason::NodeFailure, now);
                it = reorder_.erase(it);
            } else {
                ++it;
            }
        }
    }
}

void Simulation::scheduleSampling() {
    if (!config_.outputs.timeseries)
        return;
    queue_.schedule(0.0, kNoNode, "metrics", "sample",
                    [this](SimTime now) { sampleTimeseries(now); });
}

void Simulation::sampleTimeseries(SimTime now) {
    TimeseriesRow row;
    row.t = now;
    row.generated = metrics_.generated;
    row.delivered = metrics_.delivered;
    row.deliveredOnTime = metrics_.deliveredOnTime;
    row.dropped = metrics_.droppedTotal();
    for (const auto& n : nodes_) {
        row.energyUsedJ += n->energyUsedAt(now);
        if (!n->aliveFlag)
            continue;
        ++row.aliveNodes;
        if (n->awakeFlag)
            ++row.awakeNodes;
        row.backlogPackets += n->mac ? n->mac->backlogPackets().size() : 0;
        row.backlogPackets += n->sched.size();
        row.backlogPackets += static_cast<std::uint64_t>(n->pool.totalBuffered());
        if (n->pendingBind)
            ++row.backlogPackets;
    }
    metrics_.timeseries.push_back(row);
    const SimTime next = now + config_.outputs.sampleInterval;
    if (timeAtOrBefore(next, config_.durationSeconds))
        queue_.schedule(next, kNoNode, "metrics", "sample",
                        [this](SimTime t) { sampleTimeseries(t); });
}

// ---- accounting -------------------------------------------------------------

void Simulation::recordTerminal(const PacketPtr& p, const char* outcome, SimTime at,
                                double delaySeconds) {
    const bool fresh = terminal_.insert(p->id).second;
    WSN_ASSERT(fresh, "packet terminated twice");
    if (!config_.outputs.packetTrace)
        return;
    PacketRecord r;
    r.id = p->id;
    r.priorityClass = p->priorityClass;
    r.createdAt = p->createdAt;
    r.outcome = outcome;
    r.terminalAt = at;
    r.delaySeconds = delaySeconds;
    r.hops = static_cast<int>(p->hopTrace.size()) - 1;
    r.payloadBytes = p->payloadBytes;
    metrics_.packetRecords.push_back(std::move(r));
}

void Simulation::dropPacket(const PacketPtr& p, DropReason reason, SimTime now) {
    recordTerminal(p, dropReasonName(reason), now, 0.0);
    ++metrics_.dropped[static_cast<std::size_t>(reason)];
}


void Simulation::finalizeDelivery(const PacketPtr& p, SimTime now) {
    const double delay = now - p->createdAt;
    recordTerminal(p, "delivered", now, delay);
    ++metrics_.delivered;
    metrics_.deliveredPayloadBytes += static_cast<std::uint64_t>(p->payloadBytes);
    auto& cls = metrics_.byClass[p->priorityClass];
    ++cls.delivered;
    if (timeAtOrBefore(now, p->deadline)) {
        ++metrics_.deliveredOnTime;
        ++cls.deliveredOnTime;
    }
    metrics_.delaySamples.push_back(delay);
}

void Simulation::deliverToApp(const PacketPtr& p, Node& at, SimTime now) {
    at.chargeCpu(now); // application handoff
    if (p->connectionSeq == 0) {
        finalizeDelivery(p, now);
        return;
    }
    auto [it, created] = reorder_.try_emplace(std::make_pair(p->source, p->dstEntity),
                                              config_.transport.reorderCapacity);
    auto res = it->second.accept(p);
    for (const auto& d : res.overflowDropped)
        dropPacket(d, DropReason::ReorderOverflow, now);
    if (res.action == ReorderBuffer::Result::Action::Duplicate) {
        ++metrics_.transport.reorderDuplicates;
        return;
    }
    metrics_.transport.reorderReleased += res.released.size();
    for (const auto& r : res.released)
        finalizeDelivery(r, now);
}

void Simulation::countControl(const Frame& frame) {
    const auto bytes = static_cast<std::uint64_t>(frame.sizeBytes);
    switch (frame.kind) {
    case FrameKind::Beacon:
        ++metrics_.control.beaconFrames;
        metrics_.control.beaconBytes += bytes;
        break;
    case FrameKind::Probe:
        ++metrics_.control.probeFrames;
        metrics_.control.probeBytes += bytes;
        break;
    case FrameKind::Response:
        ++metrics_.control.responseFrames;
        metrics_.control.responseBytes += bytes;
        break;
    case FrameKind::Backpressure:
        ++metrics_.control.backpressureFrames;
        metrics_.control.backpressureBytes += bytes;
        break;
    default:
        WSN_ASSERT(false, "not a control frame");
    }
}

void Simulation::markInFlight(const PacketPtr& p) {
    const bool fresh = terminal_.insert(p->id).second;
    WSN_ASSERT(fresh, "in-flight packet already terminated");
    ++metrics_.inFlightAtEnd;
    if (!config_.outputs.packetTrace)
        return;
    PacketRecord r;
    r.id = p->id;
    r.priorityClass = p->priorityClass;
    r.createdAt = p->createdAt;
    r.outcome = "inFlight";
    r.terminalAt = config_.durationSeconds;
    r.hops = static_cast<int>(p->hopTrace.size()) - 1;
    r.payloadBytes = p->payloadBytes;
    metrics_.packetRecords.push_back(std::move(r));
}

void Simulation::endOfRun() {
    const SimTime end = config_.durationSeconds;
    double residualSum = 0.0;
    double utilizationSum = 0.0;
    int aliveCount = 0;
    for (auto& n : nodes_) {
        n->settlePower(end);
        if (n->aliveFlag && !n->awakeFlag) // crash folds its own sleep time in
            metrics_.dutyCycle.sleepSeconds += end - n->sleepStart;
        metrics_.energy.txJ += n->ledger.consumed(Activity::Tx);
        metrics_.energy.rxJ += n->ledger.consumed(Activity::Rx);
        metrics_.energy.idleJ += n->ledger.consumed(Activity::Idle);
        metrics_.energy.sleepJ += n->ledger.consumed(Activity::Sleep);
        metrics_.energy.cpuJ += n->ledger.consumed(Activity::Cpu);
        residualSum += std::max(0.0, n->ledger.remaining());

        const auto& mc = n->mac->counters();
        metrics_.mac.framesSent += mc.framesSent;
        metrics_.mac.dataFramesSent += mc.framesSentByKind[static_cast<int>(FrameKind::Data)];
        metrics_.mac.ackFramesSent += mc.framesSentByKind[static_cast<int>(FrameKind::Ack)];
        metrics_.mac.retransmissions += mc.retransmissions;
        metrics_.mac.falseFailures += mc.dataFalseFailures;
        metrics_.mac.duplicatesSuppressed += mc.duplicatesSuppressed;
        metrics_.aggregation.holdViolations += n->pool.holdViolations();

        if (n->aliveFlag) {
            ++aliveCount;
            utilizationSum += n->mac->channelUtilization(end);
        }
    }
    metrics_.energy.meanResidualJ = residualSum / static_cast<double>(nodes_.size());
    metrics_.mac.collisions = channel_->counters().dataGarbledAtDst;
    metrics_.mac.lossDrops = channel_->counters().dataLostAtDst;
    metrics_.mac.meanUtilization =
        aliveCount == 0 ? 0.0 : utilizationSum / static_cast<double>(aliveCount);
    metrics_.dutyCycle.framesHeardBySleeping = channel_->counters().sleepDeliveryViolations;

    for (auto& n : nodes_) {
        if (!n->aliveFlag)
            continue;
        for (const auto& p : n->mac->backlogPackets())
            markInFlight(p);
        for (const auto& p : n->sched.drainAll())
            markInFlight(p);
        for (const auto& p : n->pool.bufferedPackets())
            markInFlight(p);
        if (n->pendingBind)
            markInFlight(n->pendingBind->packet);
    }
    for (auto& [key, buf] : reorder_)
        for (const auto& p : buf.heldPackets())
            markInFlight(p);

    WSN_ASSERT(metrics_.conserved(), "packet conservation violated");
    if (config_.outputs.packetTrace)
        std::sort(metrics_.packetRecords.begin(), metrics_.packetRecords.end(),
                  [](const PacketRecord& a, const PacketRecord& b) { return a.id < b.id; });
    metrics_.finalize();
}

RunMetrics Simulation::run() {
    WSN_ASSERT(!ran_, "single-shot simulation run twice");
    ran_ = true;
    queue_.runUntil(config_.durationSeconds);
    endOfRun();
    return metrics_;
}

} // namespace wsn
