#pragma once

#include "wsn/sim/time.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace wsn {

class CausalityError : public std::runtime_error {
public:
    explicit CausalityError(const std::string& what) : std::runtime_error(what) {}
};

struct Event {
    enum class State { Pending, Fired, Canceled };

    SimTime at = 0.0;
    std::uint64_t seq = 0;
    NodeId node = kNoNode;
    const char* module = "";
    const char* kind = "";
    std::function<void(SimTime)> fn; // invoked with the fire time
    State state = State::Pending;
};

using EventHandle = std::shared_ptr<Event>;

// Deterministic discrete-event queue. Events fire in non-decreasing time
// order; equal timestamps fire in insertion order.
class EventQueue {
public:
    using TraceFn = std::function<void(const Event&)>;

    SimTime now() const { return now_; }

    // Throws CausalityError when `at` lies in the past (beyond the epsilon).
    EventHandle schedule(SimTime at, NodeId node, const char* module, const char* kind,
                         std::function<void(SimTime)> fn);

    void cancel(const EventHandle& h) {
        if (h && h->state == Event::State::Pending) {
            h->state = Event::State::Canceled;
            --liveCount_;
        }
    }

    bool empty() const { return liveCount_ == 0; }
    std::size_t pendingEvents() const { return liveCount_; }

    // Dispatches the next live event. Returns false when the queue is empty.
    bool runNext();

    // Runs events with timestamp <= horizon, then advances the clock to it.
    void runUntil(SimTime horizon);

    void setTraceFn(TraceFn fn) { trace_ = std::move(fn); }
    std::uint64_t dispatchedCount() const { return dispatched_; }

private:
    struct Cmp {
        bool operator()(const EventHandle& a, const EventHandle& b) const {
            if (a->at != b->at)
                return a->at > b->at;
            return a->seq > b->seq;
        }
    };

    std::priority_queue<EventHandle, std::vector<EventHandle>, Cmp> heap_;
    SimTime now_ = 0.0;
    std::uint64_t nextSeq_ = 0;
    std::uint64_t dispatched_ = 0;
    std::size_t liveCount_ = 0;
    TraceFn trace_;
};

} // namespace wsn
