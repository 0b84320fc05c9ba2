#pragma once

#include "wsn/routing/packet.hpp"
#include "wsn/sim/geometry.hpp"
#include "wsn/sim/time.hpp"

#include <optional>
#include <vector>

namespace wsn {

// Remaining distance over remaining time; nullopt once the deadline passed.
std::optional<double> requiredVelocity(const Packet& p, SimTime now, const Location& here);

struct QueueParams {
    int capacity = 64;
};

// Transmission queue ordered by (priorityClass, requiredVelocity)
// lexicographically, both descending, FIFO among ties. Velocities are
// recomputed with the current clock at every dequeue, so keys decay while
// packets wait.
class VelocityQueue {
public:
    explicit VelocityQueue(QueueParams params = {});

    enum class EnqueueOutcome { Accepted, ExpiredOnArrival, AcceptedWithEviction };

    struct EnqueueResult {
        EnqueueOutcome outcome = EnqueueOutcome::Accepted;
        PacketPtr evicted; // congestion drop, set for AcceptedWithEviction;
                           // equals the offered packet when it lost the comparison
    };

    EnqueueResult enqueue(PacketPtr p, SimTime now, const Location& here);

    // Returns the lexicographic maximum on refreshed keys. Entries found
    // expired are appended to `expiredOut` and never returned.
    std::optional<PacketPtr> dequeue(SimTime now, const Location& here,
                                     std::vector<PacketPtr>& expiredOut);

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    std::vector<PacketPtr> drainAll();

private:
    struct Item {
        PacketPtr packet;
        std::uint64_t seq = 0;
    };

    QueueParams params_;
    std::vector<Item> items_;
    std::uint64_t nextSeq_ = 0;
};

} // namespace wsn
