#include "wsn/sched/queue.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>

namespace wsn {

std::optional<double> requiredVelocity(const Packet& p, SimTime now, const Location& here) {
    const double remaining = p.deadline - now;
    if (remaining <= 0.0)
        return std::nullopt;
    return distance(here, p.dest.center) / remaining;
}

VelocityQueue::VelocityQueue(QueueParams params) : params_(params) {
    WSN_ASSERT(params_.capacity > 0, "queue capacity must be positive");
}

namespace {

struct Key {
    int priorityClass;
    double velocity;
    std::uint64_t seq;
};

// True when a precedes b in service order (higher class, then higher
// velocity, then earlier arrival).
bool serviceBefore(const Key& a, const Key& b) {
    if (a.priorityClass != b.priorityClass)
        return a.priorityClass > b.priorityClass;
    if (a.velocity != b.velocity)
        return a.velocity > b.velocity;
    return a.seq < b.seq;
}

} // namespace

VelocityQueue::EnqueueResult VelocityQueue::enqueue(PacketPtr p, SimTime now,
                                                    const Location& here) {
    WSN_ASSERT(p != nullptr, "enqueue of null packet");
    const auto v = requiredVelocity(*p, now, here);
    if (!v)
        return {EnqueueOutcome::ExpiredOnArrival, std::move(p)};

    if (items_.size() < static_cast<std::size_t>(params_.capacity)) {
        items_.push_back({std::move(p), nextSeq_++});
        return {EnqueueOutcome::Accepted, nullptr};
    }

    // Full: evict the least entitled member of queue ∪ {incoming} — lowest
    // class first, then lowest velocity, then latest arrival.
    Key incoming{p->priorityClass, *v, nextSeq_};
    std::size_t victim = items_.size(); // sentinel: incoming loses
    Key worst = incoming;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const auto vi = requiredVelocity(*items_[i].packet, now, here);
        // Expired residents are always less entitled than anything live.
        Key k{items_[i].packet->priorityClass, vi ? *vi : -1.0, items_[i].seq};
        if (serviceBefore(worst, k)) {
            worst = k;
            victim = i;
        }
    }

    if (victim == items_.size())
        return {EnqueueOutcome::AcceptedWithEviction, std::move(p)};

    PacketPtr out = std::move(items_[victim].packet);
    items_[victim] = {std::move(p), nextSeq_++};
    return {EnqueueOutcome::AcceptedWithEviction, std::move(out)};
}

std::optional<PacketPtr> VelocityQueue::dequeue(SimTime now, const Location& here,
                                                std::vector<PacketPtr>& expiredOut) {
    std::size_t best = items_.size();
    Key bestKey{};
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const auto v = requiredVelocity(*items_[i].packet, now, here);
        if (!v) {
            // Dead on the refreshed key: sweep it out rather than let it
            // occupy capacity until the queue drains.
            expiredOut.push_back(std::move(items_[i].packet));
            continue;
        }
        Key k{items_[i].packet->priorityClass, *v, items_[i].seq};
        if (best == items_.size() || serviceBefore(k, bestKey)) {
            bestKey = k;
            best = i;
        }
    }

    std::optional<PacketPtr> out;
    if (best != items_.size())
        out = std::move(items_[best].packet);
    items_.erase(std::remove_if(items_.begin(), items_.end(),
                                [](const Item& it) { return !it.packet; }),
                 items_.end());
    return out;
}

std::vector<PacketPtr> VelocityQueue::drainAll() {
    std::vector<PacketPtr> out;
    out.reserve(items_.size());
    for (auto& it : items_)
        out.push_back(std::move(it.packet));
    items_.clear();
    return out;
}

} // namespace wsn
