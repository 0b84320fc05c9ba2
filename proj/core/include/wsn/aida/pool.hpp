#pragma once

#include "wsn/aida/policy.hpp"
#include "wsn/aida/types.hpp"
#include "wsn/sim/time.hpp"

#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace wsn {

// Per-node aggregation buffers, keyed by (nextHop, priorityClass).
//
// A buffer's fire time is the earliest holding bound among its units,
// min(tau, slack - guard) past enqueue, so timer expiry and the slack guard
// share one deadline. The caller owns the single timer event and re-arms it
// from nextTimerAt() after every mutation.
class AggregationPool {
public:
    struct EnqueueResult {
        bool flushNow = false;            // degree target reached or guard hit
        std::vector<AidaUnit> evicted;    // capacity victims, counted by caller
    };

    struct HoldRecord {
        SimTime enqueuedAt = 0.0;
        SimTime flushedAt = 0.0;
        double boundSeconds = 0.0;
        bool violated = false;
    };

    explicit AggregationPool(AggregationPolicy policy);

    EnqueueResult enqueueUnit(AidaUnit unit, SimTime now, int targetDegree);

    // Oldest min(count, targetDegree) units of the key, order preserving.
    AidaFrameData flush(const AidaKey& key, SimTime now, int targetDegree);

    // Buffers whose fire time has passed.
    std::vector<AidaKey> dueKeys(SimTime now) const;
    std::optional<SimTime> nextTimerAt() const;

    int totalBuffered() const { return totalUnits_; }
    int bufferedCount(const AidaKey& key) const;
    bool empty() const { return totalUnits_ == 0; }

    // Teardown (node failure) and end-of-run accounting.
    std::vector<AidaUnit> drainAll();
    std::vector<PacketPtr> bufferedPackets() const;

    const AggregationPolicy& policy() const { return policy_; }
    int& adaptiveTarget() { return adaptiveTarget_; }

    const std::vector<HoldRecord>& holdAudit() const { return holdAudit_; }
    std::size_t holdViolations() const { return holdViolations_; }

private:
    struct Buffered {
        AidaUnit unit;
        std::uint64_t seq = 0;
    };
    struct Buffer {
        std::deque<Buffered> units;
        SimTime fireAt = kTimeNever;
    };

    double holdBound(const AidaUnit& u) const;
    void recomputeFireAt(Buffer& buf);

    AggregationPolicy policy_;
    std::map<AidaKey, Buffer> buffers_;
    int totalUnits_ = 0;
    int adaptiveTarget_ = 1;
    std::uint64_t nextSeq_ = 0;
    std::vector<HoldRecord> holdAudit_;
    std::size_t holdViolations_ = 0;
};

} // namespace wsn
