#pragma once

#include "wsn/routing/packet.hpp"

#include <cstdint>
#include <deque>
#include <vector>

namespace wsn {

// Exactly-once, in-order release per connection direction. Out-of-order
// arrivals wait in a bounded hold buffer; overflow evicts the longest-held
// packet. Sequence numbers start at 1.
class ReorderBuffer {
public:
    explicit ReorderBuffer(int capacity = 16);

    struct Result {
        enum class Action { Delivered, Duplicate, Held };
        Action action = Action::Held;
        std::vector<PacketPtr> released;        // in-order prefix freed by this arrival
        std::vector<PacketPtr> overflowDropped; // evicted holds
    };
    Result accept(PacketPtr p);

    std::uint64_t nextExpected() const { return nextExpected_; }
    std::vector<PacketPtr> heldPackets() const;
    std::size_t heldCount() const { return held_.size(); }

private:
    int capacity_;
    std::uint64_t nextExpected_ = 1;
    std::deque<PacketPtr> held_; // insertion order; membership keyed by connectionSeq
};

} // namespace wsn
