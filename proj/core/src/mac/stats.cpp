#include "wsn/mac/stats.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>

namespace wsn {

void UtilizationWindow::busyStart(SimTime now) {
    if (!openStart_)
        openStart_ = now;
}

void UtilizationWindow::busyEnd(SimTime now) {
    if (openStart_) {
        if (now > *openStart_)
            closed_.emplace_back(*openStart_, now);
        openStart_.reset();
    }
}

void UtilizationWindow::prune(SimTime now) {
    const SimTime horizon = now - window_;
    while (!closed_.empty() && closed_.front().second <= horizon)
        closed_.pop_front();
}

double UtilizationWindow::value(SimTime now) const {
    if (now < window_)
        return 0.0;
    const_cast<UtilizationWindow*>(this)->prune(now);
    const SimTime lo = now - window_;
    double busy = 0.0;
    for (const auto& [s, e] : closed_)
        busy += std::max(0.0, std::min(e, now) - std::max(s, lo));
    if (openStart_)
        busy += now - std::max(*openStart_, lo);
    return std::clamp(busy / window_, 0.0, 1.0);
}

LinkStats::NeighborRecord& LinkStats::record(NodeId id) {
    auto it = neighbors_.find(id);
    if (it == neighbors_.end())
        it = neighbors_.emplace(id, NeighborRecord{Ewma{delayAlpha_}, 0.0, false, false}).first;
    return it->second;
}

double LinkStats::observeDelay(NodeId neighbor, double sampleSeconds) {
    WSN_ASSERT(sampleSeconds > 0.0, "delay sample must be positive");
    return record(neighbor).delay.observe(sampleSeconds);
}

std::optional<double> LinkStats::delaySeconds(NodeId neighbor) const {
    auto it = neighbors_.find(neighbor);
    if (it == neighbors_.end() || !it->second.delay.hasValue())
        return std::nullopt;
    return it->second.delay.value();
}

void LinkStats::inflateDelay(NodeId neighbor, double factor) {
    auto it = neighbors_.find(neighbor);
    if (it != neighbors_.end())
        it->second.delay.scale(factor);
}

void LinkStats::heardFrom(NodeId neighbor, SimTime now) {
    auto& rec = record(neighbor);
    rec.lastHeard = now;
    rec.heardOnce = true;
    rec.suspected = false;
}

std::optional<SimTime> LinkStats::lastHeard(NodeId neighbor) const {
    auto it = neighbors_.find(neighbor);
    if (it == neighbors_.end() || !it->second.heardOnce)
        return std::nullopt;
    return it->second.lastHeard;
}

std::vector<NodeId> LinkStats::sweepSuspects(SimTime now, SimTime timeout) {
    std::vector<NodeId> out;
    for (auto& [id, rec] : neighbors_) {
        if (!rec.heardOnce || rec.suspected)
            continue;
        if (now - rec.lastHeard > timeout) {
            rec.suspected = true;
            out.push_back(id);
        }
    }
    return out;
}

} // namespace wsn
