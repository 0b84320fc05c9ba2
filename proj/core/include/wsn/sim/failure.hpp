#pragma once

#include "wsn/sim/geometry.hpp"
#include "wsn/sim/time.hpp"

#include <vector>

namespace wsn {

enum class FailureKind { Crash, SleepForce, Recover, MoveTo };

struct FailureEntry {
    NodeId node = 0;
    SimTime at = 0.0;
    FailureKind kind = FailureKind::Crash;
    Location to{}; // MoveTo only
};

// Entries must be sorted by time; validated at scenario load.
using FailureSchedule = std::vector<FailureEntry>;

} // namespace wsn
