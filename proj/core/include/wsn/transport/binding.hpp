#pragma once

#include "wsn/sim/geometry.hpp"
#include "wsn/sim/time.hpp"

#include <map>
#include <optional>
#include <vector>

namespace wsn {

struct EntityBinding {
    EntityId entity = 0;
    NodeId node = kNoNode;
    Location location;
    int version = 0;
    SimTime at = 0.0; // when this version took effect
};

// Versioned entity-to-node bindings with full history. Senders far from the
// entity learn of a migration only after a propagation lag; nodes near the
// previous location act as handover agents while the lag lasts. Both policies
// are realized as views over the same history.
class BindingDirectory {
public:
    // First version is 1; re-registering an entity keeps bumping the version.
    EntityBinding registerEntity(EntityId entity, NodeId node, const Location& loc,
                                 SimTime now);
    // Requires a prior registration.
    EntityBinding migrate(EntityId entity, NodeId node, const Location& loc, SimTime now);

    bool known(EntityId entity) const;
    std::optional<EntityBinding> current(EntityId entity) const;

    // What a distant sender believes at `now`: the newest version whose age
    // is at least senderLag, but never older than the initial registration.
    // senderLag <= 0 models the global-oracle directory.
    std::optional<EntityBinding> senderView(EntityId entity, SimTime now,
                                            double senderLag) const;

    const std::vector<EntityBinding>* history(EntityId entity) const;

private:
    std::map<EntityId, std::vector<EntityBinding>> history_;
};

} // namespace wsn
