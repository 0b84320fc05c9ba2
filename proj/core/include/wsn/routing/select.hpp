#pragma once

#include "wsn/routing/neighbor.hpp"
#include "wsn/routing/packet.hpp"
#include "wsn/routing/params.hpp"
#include "wsn/sim/rng.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace wsn {

struct Candidate {
    NodeId id = kNoNode;
    Location location;
    double progress = 0.0;  // meters of advance toward dest.center
    double delay = 0.0;     // per-hop delay estimate, clamped to minDelay
    double speed = 0.0;     // progress / delay
    double missRatio = 0.0;
};

// Per-hop delay estimate for a neighbor; nullopt means never measured.
using DelayLookup = std::function<std::optional<double>(NodeId)>;

// Neighbors with strictly positive progress, ascending id. Distances are
// computed on location estimates.
std::vector<Candidate> candidateSet(const Location& self, const Destination& dest,
                                    const std::vector<const NeighborEntry*>& neighbors,
                                    const DelayLookup& delay, double minDelay);

double relaySpeed(double progressMeters, double delaySeconds, double minDelay);

struct ForwardDecision {
    enum class Action { Forward, Drop, Void };
    Action action = Action::Void;
    NodeId nextHop = kNoNode;
    bool belowSetpoint = false;   // chosen via feedback control
    double dropProbability = 0.0; // p evaluated when the qualifying set was empty
};

// Setpoint-maintaining selection: sample from the qualifying set with weight
// speed^K; fall back to feedback control (probabilistic drop, else the best
// sub-setpoint candidate) when nothing qualifies.
ForwardDecision selectNextHop(const std::vector<Candidate>& candidates,
                              const RoutingParams& params, RngStream& rng);

// Baseline: argmax relay speed, no setpoint, no feedback.
ForwardDecision greedyNextHop(const std::vector<Candidate>& candidates);

bool admitPacket(double utilization, int priorityClass, const RoutingParams& params);

// Lazy-binding response timer: high progress answers early.
double responderDelay(double progressMeters, double radioRange, double ctsWindow);

} // namespace wsn
