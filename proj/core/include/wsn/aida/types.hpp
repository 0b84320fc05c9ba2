#pragma once

#include "wsn/routing/packet.hpp"
#include "wsn/sim/time.hpp"

#include <compare>
#include <vector>

namespace wsn {

// Opaque network-layer unit. The aggregation layer never inspects the packet;
// it only reads the envelope fields below.
struct AidaUnit {
    PacketPtr packet;
    int sizeBytes = 0;
    int priorityClass = 0;
    double slackSeconds = 0.0; // deadline - now - estimated downstream delay
    NodeId nextHop = kNoNode;
    SimTime enqueuedAt = 0.0;
};

// Aggregation buffers are keyed by (nextHop, priorityClass); emitted frames
// never mix keys.
struct AidaKey {
    NodeId nextHop = kNoNode;
    int priorityClass = 0;

    auto operator<=>(const AidaKey&) const = default;
};

struct AidaFrameData {
    AidaKey key{};
    std::vector<AidaUnit> units;

    int degree() const { return static_cast<int>(units.size()); }
    int payloadBytes(int perUnitLengthFieldBytes) const {
        int total = 0;
        for (const auto& u : units)
            total += u.sizeBytes + perUnitLengthFieldBytes;
        return total;
    }
};

inline constexpr int kPerUnitLengthFieldBytes = 2;

} // namespace wsn
