#pragma once

#include "wsn/sim/time.hpp"

#include <deque>
#include <map>
#include <optional>
#include <vector>

namespace wsn {

// Exponentially weighted moving average; the first sample initializes the
// estimate directly.
class Ewma {
public:
    explicit Ewma(double alpha = 0.3) : alpha_(alpha) {}

    double observe(double sample) {
        if (!value_)
            value_ = sample;
        else
            value_ = alpha_ * sample + (1.0 - alpha_) * *value_;
        return *value_;
    }

    bool hasValue() const { return value_.has_value(); }
    double value() const { return value_.value(); }
    double valueOr(double fallback) const { return value_.value_or(fallback); }
    void scale(double factor) {
        if (value_)
            value_ = *value_ * factor;
    }

private:
    double alpha_;
    std::optional<double> value_;
};

// Fraction of busy airtime observed in a sliding window. Returns 0 until the
// window has elapsed once.
class UtilizationWindow {
public:
    explicit UtilizationWindow(SimTime windowSeconds = 1.0) : window_(windowSeconds) {}

    void busyStart(SimTime now);
    void busyEnd(SimTime now);
    double value(SimTime now) const;

private:
    void prune(SimTime now);

    SimTime window_;
    std::optional<SimTime> openStart_;
    mutable std::deque<std::pair<SimTime, SimTime>> closed_;
};

// Per-neighbor link statistics held by the MAC: delay EWMA, last-heard times,
// and one-shot failure suspicion latches.
class LinkStats {
public:
    LinkStats() = default;
    LinkStats(double delayAlpha, SimTime utilizationWindow)
        : delayAlpha_(delayAlpha), utilization_(utilizationWindow) {}

    // Rejects non-positive samples.
    double observeDelay(NodeId neighbor, double sampleSeconds);
    std::optional<double> delaySeconds(NodeId neighbor) const;
    void inflateDelay(NodeId neighbor, double factor);

    void heardFrom(NodeId neighbor, SimTime now);
    std::optional<SimTime> lastHeard(NodeId neighbor) const;

    // Returns neighbors whose silence exceeds the timeout and that have not
    // been flagged since they were last heard. Flag resets on heardFrom.
    std::vector<NodeId> sweepSuspects(SimTime now, SimTime timeout);

    UtilizationWindow& utilization() { return utilization_; }
    const UtilizationWindow& utilization() const { return utilization_; }

private:
    struct NeighborRecord {
        Ewma delay;
        SimTime lastHeard = 0.0;
        bool heardOnce = false;
        bool suspected = false;
    };

    NeighborRecord& record(NodeId id);

    double delayAlpha_ = 0.3;
    UtilizationWindow utilization_{1.0};
    std::map<NodeId, NeighborRecord> neighbors_;
};

} // namespace wsn
