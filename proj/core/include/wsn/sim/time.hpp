#pragma once

#include <cstdint>
#include <limits>

namespace wsn {

// Simulation clock in seconds. Event ordering uses an absolute epsilon; ties
// are broken by insertion sequence number in the event queue.
using SimTime = double;

inline constexpr SimTime kTimeEpsilon = 1e-12;
inline constexpr SimTime kTimeNever = std::numeric_limits<double>::infinity();

inline bool timeBefore(SimTime a, SimTime b) { return a < b - kTimeEpsilon; }
inline bool timeAtOrBefore(SimTime a, SimTime b) { return a <= b + kTimeEpsilon; }
inline bool timeEqual(SimTime a, SimTime b) {
    return a - b <= kTimeEpsilon && b - a <= kTimeEpsilon;
}

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr NodeId kBroadcast = kNoNode - 1;

using EntityId = std::uint32_t;
using PacketId = std::uint64_t;

} // namespace wsn
