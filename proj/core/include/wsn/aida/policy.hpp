#pragma once

namespace wsn {

enum class AggregationMode { None, FixedDegree, OnDemand, Adaptive };

struct AggregationPolicy {
    AggregationMode mode = AggregationMode::None;
    int maxDegree = 6;
    int fixedDegree = 2;          // FixedDegree mode only
    double flushTimerSeconds = 0.03;
    double guardSeconds = 0.02;
    double uLow = 0.4;
    double uHigh = 0.7;
    int bufferCapacityUnits = 64; // pool-wide, across keys
};

// Degree control. Adaptive mode is additive-increase/additive-decrease on the
// persistent target with a hysteresis band [uLow, uHigh); the increase is
// capped by the queue length q. Other modes are stateless.
int selectDegree(double utilization, int queueLength, const AggregationPolicy& policy,
                 int& adaptiveTarget);

} // namespace wsn
