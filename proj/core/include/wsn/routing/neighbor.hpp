#pragma once

#include "wsn/sim/geometry.hpp"
#include "wsn/sim/time.hpp"

#include <map>
#include <vector>

namespace wsn {

struct NeighborEntry {
    NodeId id = kNoNode;
    Location location;       // the neighbor's own estimate, from its beacon
    double missRatio = 0.0;  // the neighbor's advertised deadline-miss EWMA
    SimTime lastBeacon = 0.0;
    bool suspected = false;  // flagged by MAC silence; cleared on next beacon
};

// Beacon-maintained 1-hop view (TableDriven mode only). Iteration order is
// ascending NodeId, which keeps candidate enumeration deterministic.
class NeighborTable {
public:
    void upsert(NodeId id, const Location& loc, double missRatio, SimTime now);
    void suspect(NodeId id);
    void evictStale(SimTime now, double timeout);
    void clear() { entries_.clear(); }

    const std::map<NodeId, NeighborEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    // Entries currently eligible as relays.
    std::vector<const NeighborEntry*> usable() const;

private:
    std::map<NodeId, NeighborEntry> entries_;
};

} // namespace wsn
