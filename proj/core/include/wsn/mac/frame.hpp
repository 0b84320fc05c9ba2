#pragma once

#include "wsn/aida/types.hpp"
#include "wsn/sim/geometry.hpp"
#include "wsn/sim/time.hpp"

#include <cstdint>
#include <variant>

namespace wsn {

enum class FrameKind { Data, Beacon, Probe, Response, Ack, Backpressure };

const char* frameKindName(FrameKind k);

struct BeaconBody {
    Location location;   // sender's own estimate
    double missRatio = 0.0;
};

struct ProbeBody {
    std::uint64_t probeId = 0;
    Location origin;     // prober's estimate, sector apex
    Location destCenter; // sector axis target
};

struct ResponseBody {
    std::uint64_t probeId = 0;
    Location responderLocation;
};

// Fixed wire-size model: every frame pays the MAC header once; bodies are
// flat structs priced by field widths. Data frames add a per-unit length
// field so aggregating n units saves exactly (n-1) headers.
inline constexpr int kBeaconBodyBytes = 24;       // id + location + miss ratio
inline constexpr int kProbeBodyBytes = 28;        // probe id + two coordinates + radius
inline constexpr int kResponseBodyBytes = 24;     // probe id + location
inline constexpr int kBackpressureBodyBytes = 4;  // advertised miss ratio

struct Frame {
    FrameKind kind = FrameKind::Data;
    NodeId src = kNoNode;
    NodeId dst = kBroadcast; // unicast target or broadcast
    std::uint64_t frameId = 0;   // per-sender sequence, stable across retries
    std::uint64_t ackFor = 0;    // Ack only
    int sizeBytes = 0;
    std::variant<std::monostate, AidaFrameData, BeaconBody, ProbeBody, ResponseBody> body;
    // Ground-truth receipt marker shared across retransmitted copies: set by
    // the addressee on intact reception, read by the sender only to classify
    // a final ack timeout (copy moved on vs. genuinely lost) so that packet
    // accounting stays exact. Never steers protocol behavior.
    std::shared_ptr<bool> truthReceived;

    bool isData() const { return kind == FrameKind::Data; }
    const AidaFrameData& data() const { return std::get<AidaFrameData>(body); }
    AidaFrameData& data() { return std::get<AidaFrameData>(body); }
};

int frameBodyBytes(FrameKind kind, const AidaFrameData* data);

} // namespace wsn
