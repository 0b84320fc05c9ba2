#include "wsn/sim/event_queue.hpp"

#include "wsn/util/assert.hpp"

#include <sstream>

namespace wsn {

EventHandle EventQueue::schedule(SimTime at, NodeId node, const char* module,
                                 const char* kind, std::function<void(SimTime)> fn) {
    if (timeBefore(at, now_)) {
        std::ostringstream os;
        os << "causality violation: schedule at " << at << " before now " << now_
           << " (" << module << "/" << kind << ")";
        throw CausalityError(os.str());
    }
    auto ev = std::make_shared<Event>();
    ev->at = at < now_ ? now_ : at;
    ev->seq = nextSeq_++;
    ev->node = node;
    ev->module = module;
    ev->kind = kind;
    ev->fn = std::move(fn);
    heap_.push(ev);
    ++liveCount_;
    return ev;
}

bool EventQueue::runNext() {
    while (!heap_.empty()) {
        EventHandle ev = heap_.top();
        heap_.pop();
        if (ev->state == Event::State::Canceled)
            continue;
        WSN_ASSERT(timeAtOrBefore(now_, ev->at), "event time went backwards");
        now_ = ev->at;
        ev->state = Event::State::Fired;
        --liveCount_;
        ++dispatched_;
        if (trace_)
            trace_(*ev);
        ev->fn(now_);
        return true;
    }
    return false;
}

void EventQueue::runUntil(SimTime horizon) {
    while (!heap_.empty()) {
        const EventHandle& top = heap_.top();
        if (top->state == Event::State::Canceled) {
            heap_.pop();
            continue;
        }
        if (top->at > horizon + kTimeEpsilon)
            break;
        runNext();
    }
    WSN_ASSERT(timeAtOrBefore(now_, horizon), "horizon before current time");
    now_ = horizon > now_ ? horizon : now_;
}

} // namespace wsn
