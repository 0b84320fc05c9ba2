#include "wsn/routing/neighbor.hpp"

namespace wsn {

void NeighborTable::upsert(NodeId id, const Location& loc, double missRatio, SimTime now) {
    NeighborEntry& e = entries_[id];
    e.id = id;
    e.location = loc;
    e.missRatio = missRatio;
    e.lastBeacon = now;
    e.suspected = false;
}

void NeighborTable::suspect(NodeId id) {
    auto it = entries_.find(id);
    if (it != entries_.end())
        it->second.suspected = true;
}

void NeighborTable::evictStale(SimTime now, double timeout) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (now - it->second.lastBeacon > timeout)
            it = entries_.erase(it);
        else
            ++it;
    }
}

std::vector<const NeighborEntry*> NeighborTable::usable() const {
    std::vector<const NeighborEntry*> out;
    out.reserve(entries_.size());
    for (const auto& [id, entry] : entries_)
        if (!entry.suspected)
            out.push_back(&entry);
    return out;
}

} // namespace wsn
