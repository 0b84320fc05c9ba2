#include "wsn/aida/pool.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>

namespace wsn {

AggregationPool::AggregationPool(AggregationPolicy policy) : policy_(policy) {}

double AggregationPool::holdBound(const AidaUnit& u) const {
    return std::max(0.0, std::min(policy_.flushTimerSeconds,
                                  u.slackSeconds - policy_.guardSeconds));
}

void AggregationPool::recomputeFireAt(Buffer& buf) {
    buf.fireAt = kTimeNever;
    for (const auto& b : buf.units)
        buf.fireAt = std::min(buf.fireAt, b.unit.enqueuedAt + holdBound(b.unit));
}

AggregationPool::EnqueueResult AggregationPool::enqueueUnit(AidaUnit unit, SimTime now,
                                                            int targetDegree) {
    WSN_ASSERT(targetDegree >= 1, "target degree");
    EnqueueResult result;
    const AidaKey key{unit.nextHop, unit.priorityClass};
    unit.enqueuedAt = now;

    Buffer& buf = buffers_[key];
    buf.units.push_back({std::move(unit), nextSeq_++});
    buf.fireAt = std::min(buf.fireAt, buf.units.back().unit.enqueuedAt +
                                          holdBound(buf.units.back().unit));
    ++totalUnits_;

    // Pool-wide capacity: evict lowest class first, then largest slack,
    // then the newest arrival.
    while (totalUnits_ > policy_.bufferCapacityUnits) {
        const Buffered* victim = nullptr;
        AidaKey victimKey{};
        for (const auto& [k, b] : buffers_) {
            for (const auto& cand : b.units) {
                if (!victim) {
                    victim = &cand;
                    victimKey = k;
                    continue;
                }
                const auto& v = victim->unit;
                const auto& c = cand.unit;
                const bool better =
                    c.priorityClass != v.priorityClass ? c.priorityClass < v.priorityClass
                    : c.slackSeconds != v.slackSeconds ? c.slackSeconds > v.slackSeconds
                                                       : cand.seq > victim->seq;
                if (better) {
                    victim = &cand;
                    victimKey = k;
                }
            }
        }
        WSN_ASSERT(victim != nullptr, "overflow with empty pool");
        auto& vbuf = buffers_[victimKey];
        auto it = std::find_if(vbuf.units.begin(), vbuf.units.end(),
                               [&](const Buffered& b) { return b.seq == victim->seq; });
        result.evicted.push_back(std::move(it->unit));
        vbuf.units.erase(it);
        --totalUnits_;
        if (vbuf.units.empty())
            buffers_.erase(victimKey);
        else
            recomputeFireAt(vbuf);
    }

    auto it = buffers_.find(key);
    if (it != buffers_.end()) {
        const int count = static_cast<int>(it->second.units.size());
        if (count >= targetDegree || it->second.fireAt <= now + kTimeEpsilon)
            result.flushNow = true;
    }
    return result;
}

AidaFrameData AggregationPool::flush(const AidaKey& key, SimTime now, int targetDegree) {
    auto it = buffers_.find(key);
    WSN_ASSERT(it != buffers_.end() && !it->second.units.empty(), "flush of empty buffer");
    Buffer& buf = it->second;

    const int take = std::min<int>(static_cast<int>(buf.units.size()),
                                   std::max(1, targetDegree));
    AidaFrameData frame;
    frame.key = key;
    frame.units.reserve(take);
    for (int i = 0; i < take; ++i) {
        AidaUnit u = std::move(buf.units.front().unit);
        buf.units.pop_front();
        --totalUnits_;
        const double bound = holdBound(u);
        const bool violated = (now - u.enqueuedAt) > bound + 1e-9;
        holdAudit_.push_back({u.enqueuedAt, now, bound, violated});
        if (violated)
            ++holdViolations_;
        frame.units.push_back(std::move(u));
    }
    if (buf.units.empty())
        buffers_.erase(it);
    else
        recomputeFireAt(buf);
    return frame;
}

std::vector<AidaKey> AggregationPool::dueKeys(SimTime now) const {
    std::vector<AidaKey> due;
    for (const auto& [k, b] : buffers_)
        if (b.fireAt <= now + kTimeEpsilon)
            due.push_back(k);
    return due;
}

std::optional<SimTime> AggregationPool::nextTimerAt() const {
    SimTime best = kTimeNever;
    for (const auto& [k, b] : buffers_)
        best = std::min(best, b.fireAt);
    if (best == kTimeNever)
        return std::nullopt;
    return best;
}

int AggregationPool::bufferedCount(const AidaKey& key) const {
    auto it = buffers_.find(key);
    return it == buffers_.end() ? 0 : static_cast<int>(it->second.units.size());
}

std::vector<AidaUnit> AggregationPool::drainAll() {
    std::vector<AidaUnit> out;
    for (auto& [key, buf] : buffers_)
        for (auto& b : buf.units)
            out.push_back(std::move(b.unit));
    buffers_.clear();
    totalUnits_ = 0;
    return out;
}

std::vector<PacketPtr> AggregationPool::bufferedPackets() const {
    std::vector<PacketPtr> out;
    for (const auto& [key, buf] : buffers_)
        for (const auto& b : buf.units)
            out.push_back(b.unit.packet);
    return out;
}

} // namespace wsn
