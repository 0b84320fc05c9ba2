#pragma once

#include "wsn/sim/geometry.hpp"
#include "wsn/sim/time.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wsn {

// Location-addressed destination. Delivery succeeds when the packet reaches
// any alive node within `radiusMeters` of `center`. Entity-addressed packets
// additionally carry the entity id for late rebinding.
struct Destination {
    Location center{};
    double radiusMeters = 0.0;
    std::optional<EntityId> entity;
};

struct HopRecord {
    NodeId node = kNoNode;
    SimTime at = 0.0;
};

enum class DropReason {
    Expired,
    Policed,
    CongestionFeedback,
    Void,
    TtlExhausted,
    MacFailure,
    StaleBinding,
    Unresolvable,
    SchedulerEvicted,
    AidaOverflow,
    ReorderOverflow,
    NodeFailure,
};
inline constexpr std::size_t kDropReasonCount = 12;

inline const char* dropReasonName(DropReason r) {
    switch (r) {
    case DropReason::Expired: return "expired";
    case DropReason::Policed: return "policed";
    case DropReason::CongestionFeedback: return "congestionFeedback";
    case DropReason::Void: return "void";
    case DropReason::TtlExhausted: return "ttlExhausted";
    case DropReason::MacFailure: return "macFailure";
    case DropReason::StaleBinding: return "staleBinding";
    case DropReason::Unresolvable: return "unresolvable";
    case DropReason::SchedulerEvicted: return "schedulerEvicted";
    case DropReason::AidaOverflow: return "aidaOverflow";
    case DropReason::ReorderOverflow: return "reorderOverflow";
    case DropReason::NodeFailure: return "nodeFailure";
    }
    return "?";
}

struct Packet {
    PacketId id = 0;
    EntityId source = 0;
    Destination dest{};
    SimTime deadline = 0.0;
    int priorityClass = 0;
    int payloadBytes = 0;
    SimTime createdAt = 0.0;
    std::vector<HopRecord> hopTrace;
    int ttlRemaining = 0;

    // Transport connection fields (0 when not entity-addressed).
    std::uint64_t connectionSeq = 0;
    EntityId dstEntity = 0;
    int boundVersion = 0; // directory version the current dest.center came from
    int rebindCount = 0;
};

using PacketPtr = std::shared_ptr<Packet>;

// Fixed per-packet header charged on the wire in addition to the payload.
inline constexpr int kPacketHeaderBytes = 24;

inline int packetWireBytes(const Packet& p) { return p.payloadBytes + kPacketHeaderBytes; }

} // namespace wsn
