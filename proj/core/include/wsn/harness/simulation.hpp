#pragma once

#include "wsn/harness/config.hpp"
#include "wsn/harness/metrics.hpp"
#include "wsn/routing/packet.hpp"
#include "wsn/sim/channel.hpp"
#include "wsn/sim/event_queue.hpp"
#include "wsn/transport/binding.hpp"
#include "wsn/transport/sequencing.hpp"

#include <map>
#include <memory>
#include <set>
#include <utility>
#include <vector>

namespace wsn {

// Composition root: one deployment, one run. Owns the event queue, the
// channel, and the per-node protocol stacks; implements the ground-truth
// node-state view the channel consults. Construction wires everything and
// schedules the scenario; run() executes to the configured duration and
// returns the collected metrics.
class Simulation final : public NodeStateView {
public:
    Simulation(ScenarioConfig config, std::uint64_t seed);
    ~Simulation() override;

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    RunMetrics run(); // single-shot

    // NodeStateView (ground truth)
    std::size_t nodeCount() const override;
    bool alive(NodeId node) const override;
    bool awake(NodeId node) const override;
    Location position(NodeId node) const override;

    const ScenarioConfig& config() const { return config_; }
    const Channel& channel() const { return *channel_; }
    const BindingDirectory& directory() const { return directory_; }
    EventQueue& queue() { return queue_; }

    // Per-node introspection for tests.
    Location truthPosition(NodeId node) const;
    bool localized(NodeId node) const;
    Location estimatedPosition(NodeId node) const;

private:
    struct Node;

    void buildNodes();
    void localizeNode(NodeId id);
    void bootstrapLocalization();
    void registerEntities();
    void scheduleTraffic();
    void scheduleFailures();
    void scheduleSampling();
    void flowFire(std::size_t flowIdx, NodeId fixedSource, SimTime now);
    void originate(NodeId source, std::size_t flowIdx, SimTime now);
    void applyFailure(const FailureEntry& entry, SimTime now);
    void onNodeCrashed(NodeId id, SimTime now);
    void sampleTimeseries(SimTime now);
    void endOfRun();

    // Central packet accounting; every generated packet terminates exactly once.
    void recordTerminal(const PacketPtr& p, const char* outcome, SimTime at,
                        double delaySeconds);
    void dropPacket(const PacketPtr& p, DropReason reason, SimTime now);
    void finalizeDelivery(const PacketPtr& p, SimTime now);
    void deliverToApp(const PacketPtr& p, Node& at, SimTime now);
    void countControl(const Frame& frame);
    void markInFlight(const PacketPtr& p);

    ScenarioConfig config_;
    std::uint64_t seed_ = 0;
    EventQueue queue_;
    std::unique_ptr<Channel> channel_;
    std::vector<std::unique_ptr<Node>> nodes_;
    BindingDirectory directory_;
    // Reorder state keyed by (source entity, destination entity) so it
    // follows the destination entity across migrations.
    std::map<std::pair<EntityId, EntityId>, ReorderBuffer> reorder_;
    RunMetrics metrics_;
    std::set<PacketId> terminal_;
    PacketId packetSeq_ = 0;
    std::vector<std::uint64_t> flowSeq_;
    bool ran_ = false;
};

} // namespace wsn
