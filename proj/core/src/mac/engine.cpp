#include "wsn/mac/engine.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>
#include <cmath>

namespace wsn {

const char* frameKindName(FrameKind k) {
    switch (k) {
    case FrameKind::Data: return "data";
    case FrameKind::Beacon: return "beacon";
    case FrameKind::Probe: return "probe";
    case FrameKind::Response: return "response";
    case FrameKind::Ack: return "ack";
    case FrameKind::Backpressure: return "backpressure";
    }
    return "?";
}

int frameBodyBytes(FrameKind kind, const AidaFrameData* data) {
    switch (kind) {
    case FrameKind::Data:
        WSN_ASSERT(data != nullptr, "data frame without units");
        return data->payloadBytes(kPerUnitLengthFieldBytes);
    case FrameKind::Beacon: return kBeaconBodyBytes;
    case FrameKind::Probe: return kProbeBodyBytes;
    case FrameKind::Response: return kResponseBodyBytes;
    case FrameKind::Ack: return 0;
    case FrameKind::Backpressure: return kBackpressureBodyBytes;
    }
    return 0;
}

MacEngine::MacEngine(NodeId self, MacParams params, EventQueue& queue, Channel& channel,
                     RngStream backoffRng, double delayAlpha, double utilizationWindow,
                     MacClient& client)
    : self_(self), params_(params), queue_(queue), channel_(channel),
      rng_(std::move(backoffRng)), client_(client), stats_(delayAlpha, utilizationWindow) {
    WSN_ASSERT(params_.slotTime > 0, "slotTime must be positive");
    WSN_ASSERT(params_.cwMin >= 1 && params_.cwMin <= params_.cwMax, "bad contention window");
    WSN_ASSERT(params_.retryLimit >= 0, "negative retry limit");
    channel_.attach(self_, this);
    armSweep(queue_.now() + params_.sweepPeriod);
}

void MacEngine::armSweep(SimTime at) {
    sweepEvent_ = queue_.schedule(at, self_, "mac", "suspicionSweep", [this](SimTime now) {
        if (enabled_)
            for (NodeId id : stats_.sweepSuspects(now, params_.suspicionTimeout))
                client_.onNeighborSuspected(id, now);
        armSweep(now + params_.sweepPeriod);
    });
}

void MacEngine::submitData(Frame frame) {
    WSN_ASSERT(enabled_, "submitData on disabled MAC");
    WSN_ASSERT(frame.kind == FrameKind::Data && frame.dst != kBroadcast,
               "data frames are unicast");
    dataQ_.emplace_back(std::move(frame), queue_.now());
    serviceNext();
}

void MacEngine::submitControl(Frame frame) {
    WSN_ASSERT(enabled_, "submitControl on disabled MAC");
    WSN_ASSERT(frame.kind != FrameKind::Data && frame.kind != FrameKind::Ack,
               "not a control frame");
    controlQ_.emplace_back(std::move(frame), queue_.now());
    serviceNext();
}

void MacEngine::serviceNext() {
    if (current_ || servicing_ || !enabled_)
        return;
    servicing_ = true;
    while (!current_) {
        if (!controlQ_.empty()) {
            auto [frame, at] = std::move(controlQ_.front());
            controlQ_.pop_front();
            beginService(std::move(frame), at);
            break;
        }
        if (!dataQ_.empty()) {
            auto [frame, at] = std::move(dataQ_.front());
            dataQ_.pop_front();
            beginService(std::move(frame), at);
            break;
        }
        if (!client_.onMacIdle(queue_.now()))
            break; // nothing to pump
    }
    servicing_ = false;
}

void MacEngine::beginService(Frame frame, SimTime submittedAt) {
    Service s;
    s.frame = std::move(frame);
    s.submittedAt = submittedAt;
    s.reliable = s.frame.kind == FrameKind::Data;
    s.cw = params_.cwMin;
    s.backoff = static_cast<int>(rng_.uniformInt(static_cast<std::uint64_t>(s.cw)));
    current_ = std::move(s);
    armSlot();
}

void MacEngine::armSlot() {
    const SimTime now = queue_.now();
    const double k = std::floor((now + kTimeEpsilon) / params_.slotTime);
    const SimTime at = (k + 1.0) * params_.slotTime;
    slotEvent_ = queue_.schedule(at, self_, "mac", "slot",
                                 [this](SimTime t) { slotTick(t); });
}

void MacEngine::slotTick(SimTime now) {
    WSN_ASSERT(current_.has_value(), "slot tick without service");
    if (channel_.busy(self_) || transmitting_ || timeBefore(now, navUntil_)) {
        armSlot();
        return;
    }
    if (current_->backoff == 0) {
        startTransmit(now);
        return;
    }
    const SimTime slotStart = now - params_.slotTime;
    if (channel_.idleSince(self_, slotStart) && timeAtOrBefore(lastOwnTxEnd_, slotStart))
        --current_->backoff;
    armSlot();
}

void MacEngine::startTransmit(SimTime now) {
    queue_.cancel(slotEvent_);
    slotEvent_.reset();
    Service& s = *current_;
    const auto result = channel_.transmit(self_, s.frame);
    s.dstEverAudible = s.dstEverAudible || result.dstAudible;
    transmitting_ = true;
    stats_.utilization().busyStart(now);
    ++counters_.framesSent;
    ++counters_.framesSentByKind[static_cast<int>(s.frame.kind)];
    if (s.attempt > 1)
        ++counters_.retransmissions;
    const double airtime = result.endsAt - now;
    txEvent_ = queue_.schedule(result.endsAt, self_, "mac", "txDone",
                               [this, airtime](SimTime t) { txDone(t, false, airtime); });
}

void MacEngine::sendImmediate(const Frame& frame) {
    WSN_ASSERT(enabled_, "sendImmediate on disabled MAC");
    WSN_ASSERT(!transmitting_, "immediate send while transmitting");
    const SimTime now = queue_.now();
    const auto result = channel_.transmit(self_, frame);
    transmitting_ = true;
    stats_.utilization().busyStart(now);
    ++counters_.framesSent;
    ++counters_.framesSentByKind[static_cast<int>(frame.kind)];
    const double airtime = result.endsAt - now;
    txEvent_ = queue_.schedule(result.endsAt, self_, "mac", "txDone",
                               [this, airtime](SimTime t) { txDone(t, true, airtime); });
}

void MacEngine::txDone(SimTime now, bool immediate, double airtime) {
    transmitting_ = false;
    lastOwnTxEnd_ = now;
    stats_.utilization().busyEnd(now);
    client_.onTxEnergy(airtime, now);
    if (immediate) {
        // Ack or response; no service record to settle, but the radio just
        // cleared, so resume the queues (and pump the client when empty).
        serviceNext();
        return;
    }

    WSN_ASSERT(current_.has_value(), "txDone without service");
    if (!current_->reliable) {
        Frame sent = std::move(current_->frame);
        current_.reset();
        client_.onControlSent(sent, now);
        serviceNext();
        return;
    }
    current_->awaitingAck = true;
    ackEvent_ = queue_.schedule(now + params_.ackTimeout, self_, "mac", "ackTimeout",
                                [this](SimTime t) { ackTimeout(t); });
}

void MacEngine::ackTimeout(SimTime now) {
    WSN_ASSERT(current_ && current_->awaitingAck, "stray ack timeout");
    Service& s = *current_;
    s.awaitingAck = false;
    if (s.attempt > params_.retryLimit) {
        const bool gotIt = s.frame.truthReceived && *s.frame.truthReceived;
        finishData(gotIt ? MacDataResult::Status::FalseFailure
                         : (s.dstEverAudible ? MacDataResult::Status::RetriesExhausted
                                             : MacDataResult::Status::NoReceiver),
                   now);
        return;
    }
    ++s.attempt;
    s.cw = std::min(s.cw * 2, params_.cwMax);
    s.backoff = static_cast<int>(rng_.uniformInt(static_cast<std::uint64_t>(s.cw)));
    armSlot();
}

void MacEngine::finishData(MacDataResult::Status status, SimTime now) {
    MacDataResult result;
    result.status = status;
    result.attempts = current_->attempt;
    if (status == MacDataResult::Status::Delivered) {
        result.delaySeconds = now - current_->submittedAt;
        ++counters_.dataDelivered;
        stats_.observeDelay(current_->frame.dst, result.delaySeconds);
    } else if (status == MacDataResult::Status::FalseFailure) {
        ++counters_.dataFalseFailures;
    } else {
        ++counters_.dataFailed;
    }
    Frame sent = std::move(current_->frame);
    current_.reset();
    client_.onDataDone(sent, result, now);
    serviceNext();
}

void MacEngine::onBusyStart(SimTime now) {
    stats_.utilization().busyStart(now);
}

void MacEngine::onBusyEnd(SimTime now) {
    stats_.utilization().busyEnd(now);
    client_.onChannelIdle(now);
}

void MacEngine::onFrame(const Frame& frame, SimTime now) {
    WSN_ASSERT(enabled_, "frame delivered to disabled MAC");
    stats_.heardFrom(frame.src, now);

    if (frame.kind == FrameKind::Ack) {
        if (current_ && current_->awaitingAck && frame.src == current_->frame.dst &&
            frame.ackFor == current_->frame.frameId) {
            queue_.cancel(ackEvent_);
            ackEvent_.reset();
            current_->awaitingAck = false;
            finishData(MacDataResult::Status::Delivered, now);
        }
        return;
    }

    if (frame.kind == FrameKind::Data) {
        if (frame.dst != self_)
            return; // overheard unicast data is noise
        if (frame.truthReceived)
            *frame.truthReceived = true;
        Frame ack;
        ack.kind = FrameKind::Ack;
        ack.src = self_;
        ack.dst = frame.src;
        ack.frameId = nextFrameId();
        ack.ackFor = frame.frameId;
        ack.sizeBytes = params_.headerBytes;
        sendImmediate(ack); // zero turnaround; medium just freed
        auto [it, fresh] = lastSeenFrameId_.try_emplace(frame.src, frame.frameId);
        if (!fresh) {
            if (it->second == frame.frameId) {
                ++counters_.duplicatesSuppressed;
                return;
            }
            it->second = frame.frameId;
        }
        client_.onMacFrame(frame, true, now);
        return;
    }

    const bool mine = frame.dst == kBroadcast || frame.dst == self_;
    if (!mine && frame.kind != FrameKind::Response)
        return; // only responses are interesting to overhear
    client_.onMacFrame(frame, mine, now);
}

void MacEngine::setEnabled(bool enabled) {
    if (enabled == enabled_)
        return;
    if (!enabled)
        WSN_ASSERT(pipelineIdle(), "radio must drain before sleeping");
    enabled_ = enabled;
}

void MacEngine::cancelTimers() {
    for (auto* handle : {&slotEvent_, &ackEvent_, &sweepEvent_, &txEvent_}) {
        queue_.cancel(*handle);
        handle->reset();
    }
}

std::vector<Frame> MacEngine::shutdown() {
    cancelTimers();
    enabled_ = false;
    transmitting_ = false;
    // A copy that already reached the addressee belongs downstream; counting
    // it here as well would break packet conservation.
    auto movedOn = [](const Frame& f) { return f.truthReceived && *f.truthReceived; };
    std::vector<Frame> orphans;
    if (current_) {
        if (current_->reliable && !movedOn(current_->frame))
            orphans.push_back(std::move(current_->frame));
        current_.reset();
    }
    for (auto& [frame, at] : dataQ_)
        if (!movedOn(frame))
            orphans.push_back(std::move(frame));
    dataQ_.clear();
    controlQ_.clear();
    return orphans;
}

std::vector<PacketPtr> MacEngine::backlogPackets() const {
    std::vector<PacketPtr> out;
    auto take = [&out](const Frame& f) {
        if (f.kind != FrameKind::Data)
            return;
        if (f.truthReceived && *f.truthReceived)
            return; // owned downstream now
        for (const auto& unit : f.data().units)
            out.push_back(unit.packet);
    };
    if (current_)
        take(current_->frame);
    for (const auto& [frame, at] : dataQ_)
        take(frame);
    return out;
}

} // namespace wsn
