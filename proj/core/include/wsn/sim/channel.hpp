#pragma once

#include "wsn/mac/frame.hpp"
#include "wsn/sim/event_queue.hpp"
#include "wsn/sim/geometry.hpp"
#include "wsn/sim/radio.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/sim/time.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace wsn {

// Ground-truth node state the channel consults; implemented by the simulation.
class NodeStateView {
public:
    virtual ~NodeStateView() = default;
    virtual std::size_t nodeCount() const = 0;
    virtual bool alive(NodeId node) const = 0;
    virtual bool awake(NodeId node) const = 0;
    virtual Location position(NodeId node) const = 0;
};

// Per-node radio upcalls; implemented by the MAC engine.
class ChannelListener {
public:
    virtual ~ChannelListener() = default;
    virtual void onBusyStart(SimTime now) = 0; // audible activity 0 -> 1
    virtual void onBusyEnd(SimTime now) = 0;   // audible activity 1 -> 0
    virtual void onFrame(const Frame& frame, SimTime now) = 0; // intact reception
};

struct ChannelCounters {
    std::uint64_t transmissions = 0;
    std::uint64_t deliveries = 0;
    std::uint64_t dataAttempts = 0;      // unicast data transmissions
    std::uint64_t dataGarbledAtDst = 0;  // collision or half-duplex at the addressee
    std::uint64_t dataLostAtDst = 0;     // Bernoulli loss at the addressee
    std::uint64_t dataMissingDst = 0;    // addressee absent from the start snapshot
    std::uint64_t sleepDeliveryViolations = 0; // asserted zero
};

// Unit-disk broadcast medium. Receivers are snapshotted at transmission
// start (alive, awake, in range, not the sender); a frame reaches a receiver
// intact iff no other audible transmission overlapped it there, the receiver
// was not itself transmitting, sender and receiver are alive/awake at the
// end, and the per-receiver loss draw passes. Overlap garbles both frames at
// that receiver — no capture.
class Channel {
public:
    Channel(EventQueue& queue, const NodeStateView& nodes, RadioModel radio,
            RngStream lossRng);

    void attach(NodeId node, ChannelListener* listener);

    // Charged for every audible frame at an awake receiver (addressee or not).
    using RxEnergyHook = std::function<void(NodeId node, double airtimeSeconds, SimTime now)>;
    void setRxEnergyHook(RxEnergyHook hook) { rxEnergy_ = std::move(hook); }

    struct TxResult {
        SimTime endsAt = 0.0;
        bool dstAudible = false; // unicast addressee present in the snapshot
    };
    TxResult transmit(NodeId src, const Frame& frame);

    // Carrier sense: any foreign transmission audible right now.
    bool busy(NodeId node) const { return activeCount_[node] > 0; }
    // True when no audible activity has overlapped (since, now].
    bool idleSince(NodeId node, SimTime since) const {
        return activeCount_[node] == 0 && timeAtOrBefore(lastBusyEnd_[node], since);
    }

    const ChannelCounters& counters() const { return counters_; }
    const RadioModel& radio() const { return radio_; }
    // Data units still on the air (for end-of-run in-flight accounting).
    std::vector<PacketPtr> inFlightPackets() const;

private:
    struct Transmission {
        Frame frame;
        NodeId src = kNoNode;
        SimTime start = 0.0;
        SimTime end = 0.0;
        std::vector<NodeId> audible; // ascending
        std::vector<bool> garbled;   // parallel to audible
    };
    using TxPtr = std::shared_ptr<Transmission>;

    void finish(const TxPtr& tx);
    static int indexOf(const Transmission& tx, NodeId node);

    EventQueue& queue_;
    const NodeStateView& nodes_;
    RadioModel radio_;
    RngStream lossRng_;
    RxEnergyHook rxEnergy_;
    std::vector<ChannelListener*> listeners_;
    std::vector<TxPtr> active_;
    std::vector<int> activeCount_;
    std::vector<SimTime> lastBusyEnd_;
    ChannelCounters counters_;
};

} // namespace wsn
