#include "wsn/routing/select.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>
#include <cmath>

namespace wsn {

const char* routingModeName(RoutingMode mode) {
    switch (mode) {
    case RoutingMode::TableDriven: return "TableDriven";
    case RoutingMode::Greedy: return "Greedy";
    case RoutingMode::LazyBinding: return "LazyBinding";
    }
    return "?";
}

double relaySpeed(double progressMeters, double delaySeconds, double minDelay) {
    return progressMeters / std::max(delaySeconds, minDelay);
}

std::vector<Candidate> candidateSet(const Location& self, const Destination& dest,
                                    const std::vector<const NeighborEntry*>& neighbors,
                                    const DelayLookup& delay, double minDelay) {
    const double own = distance(self, dest.center);
    std::vector<Candidate> out;
    for (const NeighborEntry* n : neighbors) {
        const double progress = own - distance(n->location, dest.center);
        if (progress <= 0.0)
            continue;
        Candidate c;
        c.id = n->id;
        c.location = n->location;
        c.progress = progress;
        c.delay = std::max(delay(n->id).value_or(minDelay), minDelay);
        c.speed = progress / c.delay;
        c.missRatio = n->missRatio;
        out.push_back(c);
    }
    return out;
}

namespace {

const Candidate* fastest(const std::vector<Candidate>& candidates) {
    const Candidate* best = nullptr;
    for (const auto& c : candidates)
        if (!best || c.speed > best->speed)
            best = &c; // ties keep the lowest id (ascending order)
    return best;
}

} // namespace

ForwardDecision selectNextHop(const std::vector<Candidate>& candidates,
                              const RoutingParams& params, RngStream& rng) {
    ForwardDecision d;
    if (candidates.empty())
        return d; // Void

    std::vector<const Candidate*> qualifying;
    for (const auto& c : candidates)
        if (c.speed >= params.setpointSpeed)
            qualifying.push_back(&c);

    if (!qualifying.empty()) {
        double total = 0.0;
        std::vector<double> weights;
        weights.reserve(qualifying.size());
        for (const Candidate* c : qualifying) {
            const double w = std::pow(c->speed, params.weightExponent);
            weights.push_back(w);
            total += w;
        }
        double draw = rng.uniform() * total;
        const Candidate* chosen = qualifying.back();
        for (std::size_t i = 0; i < qualifying.size(); ++i) {
            draw -= weights[i];
            if (draw < 0.0) {
                chosen = qualifying[i];
                break;
            }
        }
        d.action = ForwardDecision::Action::Forward;
        d.nextHop = chosen->id;
        return d;
    }

    // Feedback control: congestion evidence is the neighborhood's own miss
    // reports; relief is a probabilistic local drop plus backpressure.
    double meanMiss = 0.0;
    for (const auto& c : candidates)
        meanMiss += c.missRatio;
    meanMiss /= static_cast<double>(candidates.size());
    d.dropProbability = std::clamp(meanMiss, 0.0, 1.0);
    if (rng.bernoulli(d.dropProbability)) {
        d.action = ForwardDecision::Action::Drop;
        return d;
    }
    d.action = ForwardDecision::Action::Forward;
    d.nextHop = fastest(candidates)->id;
    d.belowSetpoint = true;
    return d;
}

ForwardDecision greedyNextHop(const std::vector<Candidate>& candidates) {
    ForwardDecision d;
    if (candidates.empty())
        return d;
    d.action = ForwardDecision::Action::Forward;
    d.nextHop = fastest(candidates)->id;
    return d;
}

bool admitPacket(double utilization, int priorityClass, const RoutingParams& params) {
    return utilization < params.admissionThreshold || priorityClass >= params.bypassClass;
}

double responderDelay(double progressMeters, double radioRange, double ctsWindow) {
    WSN_ASSERT(radioRange > 0 && ctsWindow > 0, "bad responder timing inputs");
    const double frac = std::clamp(progressMeters / radioRange, 0.0, 1.0);
    return ctsWindow * (1.0 - frac);
}

} // namespace wsn
