#pragma once

#include "wsn/mac/frame.hpp"
#include "wsn/mac/params.hpp"
#include "wsn/mac/stats.hpp"
#include "wsn/sim/channel.hpp"
#include "wsn/sim/event_queue.hpp"
#include "wsn/sim/rng.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>
#include <optional>

namespace wsn {

struct MacDataResult {
    enum class Status {
        Delivered,        // ack received
        FalseFailure,     // retries exhausted but the addressee did receive a copy
        RetriesExhausted, // addressee heard at least one attempt, never acked
        NoReceiver        // addressee absent from every attempt (down/asleep/moved)
    };
    Status status = Status::Delivered;
    double delaySeconds = 0.0; // submit-to-ack, Delivered only
    int attempts = 1;
};

// Upcalls into the per-node protocol glue.
class MacClient {
public:
    virtual ~MacClient() = default;
    // Pipeline drained; return true after submitting more work.
    virtual bool onMacIdle(SimTime now) = 0;
    // Intact frame: unicast to this node, broadcast, or an overheard Response
    // (suppression input). Acks are consumed inside the MAC.
    virtual void onMacFrame(const Frame& frame, bool addressedToMe, SimTime now) = 0;
    virtual void onDataDone(const Frame& frame, const MacDataResult& result, SimTime now) = 0;
    virtual void onControlSent(const Frame& frame, SimTime now) = 0;
    virtual void onNeighborSuspected(NodeId neighbor, SimTime now) = 0;
    virtual void onTxEnergy(double airtimeSeconds, SimTime now) = 0;
    virtual void onChannelIdle(SimTime now) = 0; // audible activity ceased
};

struct MacCounters {
    std::uint64_t framesSent = 0; // transmission attempts, all kinds
    std::array<std::uint64_t, 6> framesSentByKind{};
    std::uint64_t retransmissions = 0;
    std::uint64_t dataDelivered = 0;
    std::uint64_t dataFailed = 0;
    std::uint64_t dataFalseFailures = 0;
    std::uint64_t duplicatesSuppressed = 0;
};

// Slotted CSMA with binary exponential backoff and stop-and-wait reliability
// for data frames. Slot boundaries are global (k * slotTime) so contention
// between aligned stations is analyzable. One frame is in service at a time;
// control frames are best-effort single-shot, data frames are acked and
// retried up to retryLimit times with the window doubling per retry. Acks go
// out immediately at data end, without contention.
class MacEngine : public ChannelListener {
public:
    MacEngine(NodeId self, MacParams params, EventQueue& queue, Channel& channel,
              RngStream backoffRng, double delayAlpha, double utilizationWindow,
              MacClient& client);

    MacEngine(const MacEngine&) = delete;
    MacEngine& operator=(const MacEngine&) = delete;

    void submitData(Frame frame);    // reliable, queued behind control
    void submitControl(Frame frame); // best-effort, served first
    // Single uncontended transmission right now (probe responses). Caller
    // must check mediumFree() first.
    void sendImmediate(const Frame& frame);
    bool mediumFree() const { return !channel_.busy(self_) && !transmitting_; }

    // Virtual carrier sense: hold queued traffic (not immediate sends) until
    // `until`, so an overheard contention window stays clear of our data.
    void deferUntil(SimTime until) { navUntil_ = std::max(navUntil_, until); }
    // The overheard exchange concluded early (e.g. the round bound a relay);
    // queued traffic may flow again.
    void releaseNav() { navUntil_ = 0.0; }

    bool pipelineIdle() const {
        return !current_ && !transmitting_ && controlQ_.empty() && dataQ_.empty();
    }
    bool hasDataBacklog() const { return (current_ && current_->reliable) || !dataQ_.empty(); }

    // Powered-off radios (sleep) are detached from the event flow. Enabling
    // requires an idle pipeline.
    void setEnabled(bool enabled);
    bool enabled() const { return enabled_; }
    // Crash teardown: cancels all pending work and returns unserviced data
    // frames (including any in service or on the air) for drop accounting.
    std::vector<Frame> shutdown();

    double channelUtilization(SimTime now) const { return stats_.utilization().value(now); }
    LinkStats& linkStats() { return stats_; }
    const LinkStats& linkStats() const { return stats_; }
    const MacCounters& counters() const { return counters_; }
    std::uint64_t nextFrameId() { return ++frameIdSeq_; }

    // In-flight data units owned by this MAC (conservation accounting).
    std::vector<PacketPtr> backlogPackets() const;

    // ChannelListener
    void onBusyStart(SimTime now) override;
    void onBusyEnd(SimTime now) override;
    void onFrame(const Frame& frame, SimTime now) override;

private:
    struct Service {
        Frame frame;
        SimTime submittedAt = 0.0;
        bool reliable = false;
        int attempt = 1;
        int cw = 0;
        int backoff = 0;
        bool dstEverAudible = false;
        bool awaitingAck = false;
    };

    void serviceNext();
    void beginService(Frame frame, SimTime submittedAt);
    void armSlot();
    void slotTick(SimTime now);
    void startTransmit(SimTime now);
    void txDone(SimTime now, bool immediate, double airtime);
    void ackTimeout(SimTime now);
    void finishData(MacDataResult::Status status, SimTime now);
    void armSweep(SimTime at);
    void cancelTimers();

    NodeId self_;
    MacParams params_;
    EventQueue& queue_;
    Channel& channel_;
    RngStream rng_;
    MacClient& client_;
    LinkStats stats_;

    std::deque<std::pair<Frame, SimTime>> controlQ_;
    std::deque<std::pair<Frame, SimTime>> dataQ_;
    std::optional<Service> current_;
    bool transmitting_ = false;
    bool servicing_ = false;
    bool enabled_ = true;
    SimTime lastOwnTxEnd_ = -1.0;
    SimTime navUntil_ = 0.0;
    std::uint64_t frameIdSeq_ = 0;
    std::map<NodeId, std::uint64_t> lastSeenFrameId_;

    EventHandle slotEvent_;
    EventHandle ackEvent_;
    EventHandle sweepEvent_;
    EventHandle txEvent_;
    MacCounters counters_;
};

} // namespace wsn
