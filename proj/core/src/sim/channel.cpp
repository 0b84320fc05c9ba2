#include "wsn/sim/channel.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>

namespace wsn {

Channel::Channel(EventQueue& queue, const NodeStateView& nodes, RadioModel radio,
                 RngStream lossRng)
    : queue_(queue), nodes_(nodes), radio_(radio), lossRng_(std::move(lossRng)),
      listeners_(nodes.nodeCount(), nullptr), activeCount_(nodes.nodeCount(), 0),
      lastBusyEnd_(nodes.nodeCount(), -1.0) {}

void Channel::attach(NodeId node, ChannelListener* listener) {
    WSN_ASSERT(node < listeners_.size(), "attach out of range");
    listeners_[node] = listener;
}

int Channel::indexOf(const Transmission& tx, NodeId node) {
    auto it = std::lower_bound(tx.audible.begin(), tx.audible.end(), node);
    if (it == tx.audible.end() || *it != node)
        return -1;
    return static_cast<int>(it - tx.audible.begin());
}

Channel::TxResult Channel::transmit(NodeId src, const Frame& frame) {
    const SimTime now = queue_.now();
    WSN_ASSERT(nodes_.alive(src) && nodes_.awake(src), "transmit from down radio");
    WSN_ASSERT(frame.sizeBytes > 0, "frame without size");

    auto tx = std::make_shared<Transmission>();
    tx->frame = frame;
    tx->src = src;
    tx->start = now;
    tx->end = now + radio_.airtimeSeconds(frame.sizeBytes);

    const Location at = nodes_.position(src);
    for (NodeId r = 0; r < nodes_.nodeCount(); ++r) {
        if (r == src || !nodes_.alive(r) || !nodes_.awake(r))
            continue;
        if (inRange(at, nodes_.position(r), radio_.rangeMeters))
            tx->audible.push_back(r);
    }
    tx->garbled.assign(tx->audible.size(), false);

    // Overlap rules: an ongoing transmission audible at a common receiver
    // garbles both frames there; a receiver currently transmitting cannot
    // hear; the new carrier garbles ongoing receptions at our own radio too
    // (half-duplex), which matters only for bookkeeping since we are not in
    // any audible set of our own frame.
    for (const auto& other : active_) {
        if (timeAtOrBefore(other->end, now))
            continue; // zero-length overlap at a shared boundary
        if (int i = indexOf(*other, src); i >= 0)
            other->garbled[i] = true;
        for (std::size_t i = 0; i < tx->audible.size(); ++i) {
            const NodeId r = tx->audible[i];
            if (r == other->src) {
                tx->garbled[i] = true; // half-duplex at the other sender
                continue;
            }
            if (int j = indexOf(*other, r); j >= 0) {
                tx->garbled[i] = true;
                other->garbled[j] = true;
            }
        }
    }

    for (std::size_t i = 0; i < tx->audible.size(); ++i) {
        const NodeId r = tx->audible[i];
        if (++activeCount_[r] == 1 && listeners_[r])
            listeners_[r]->onBusyStart(now);
    }

    active_.push_back(tx);
    queue_.schedule(tx->end, src, "channel", "txEnd", [this, tx](SimTime) { finish(tx); });

    ++counters_.transmissions;
    TxResult result;
    result.endsAt = tx->end;
    if (frame.kind == FrameKind::Data && frame.dst != kBroadcast) {
        ++counters_.dataAttempts;
        result.dstAudible = indexOf(*tx, frame.dst) >= 0;
        if (!result.dstAudible)
            ++counters_.dataMissingDst;
    }
    return result;
}

void Channel::finish(const TxPtr& tx) {
    const SimTime now = queue_.now();
    active_.erase(std::remove(active_.begin(), active_.end(), tx), active_.end());

    // Settle carrier state before deliveries so immediate replies (acks) see
    // an idle medium and extend the busy interval contiguously.
    for (const NodeId r : tx->audible) {
        WSN_ASSERT(activeCount_[r] > 0, "busy count underflow");
        if (--activeCount_[r] == 0) {
            lastBusyEnd_[r] = now;
            if (listeners_[r])
                listeners_[r]->onBusyEnd(now);
        }
    }

    // Abort if the sender died or was forced asleep mid-frame: its radio
    // stopped, and its queued work was already torn down.
    const bool senderUp = nodes_.alive(tx->src) && nodes_.awake(tx->src);
    const bool isUnicastData = tx->frame.kind == FrameKind::Data && tx->frame.dst != kBroadcast;
    const double airtime = tx->end - tx->start;

    for (std::size_t i = 0; i < tx->audible.size(); ++i) {
        const NodeId r = tx->audible[i];
        const bool up = nodes_.alive(r) && nodes_.awake(r);
        if (up && rxEnergy_)
            rxEnergy_(r, airtime, now);
        if (!senderUp || !up) {
            if (isUnicastData && r == tx->frame.dst)
                ++counters_.dataMissingDst;
            continue;
        }
        if (tx->garbled[i]) {
            if (isUnicastData && r == tx->frame.dst)
                ++counters_.dataGarbledAtDst;
            continue;
        }
        if (lossRng_.bernoulli(radio_.lossProbability)) {
            if (isUnicastData && r == tx->frame.dst)
                ++counters_.dataLostAtDst;
            continue;
        }
        if (!nodes_.awake(r)) {
            ++counters_.sleepDeliveryViolations;
            continue;
        }
        ++counters_.deliveries;
        if (listeners_[r])
            listeners_[r]->onFrame(tx->frame, now);
    }
}

std::vector<PacketPtr> Channel::inFlightPackets() const {
    std::vector<PacketPtr> out;
    for (const auto& tx : active_)
        if (tx->frame.kind == FrameKind::Data)
            for (const auto& unit : tx->frame.data().units)
                out.push_back(unit.packet);
    return out;
}

} // namespace wsn
