#include "wsn/aida/policy.hpp"

#include <algorithm>

namespace wsn {

int selectDegree(double utilization, int queueLength, const AggregationPolicy& policy,
                 int& adaptiveTarget) {
    switch (policy.mode) {
    case AggregationMode::None:
        return 1;
    case AggregationMode::FixedDegree:
        return std::clamp(policy.fixedDegree, 1, policy.maxDegree);
    case AggregationMode::OnDemand:
        return std::clamp(queueLength, 1, policy.maxDegree);
    case AggregationMode::Adaptive:
        if (utilization >= policy.uHigh)
            adaptiveTarget = std::min({adaptiveTarget + 1, policy.maxDegree,
                                       std::max(queueLength, 1)});
        else if (utilization <= policy.uLow)
            adaptiveTarget = std::max(adaptiveTarget - 1, 1);
        return adaptiveTarget;
    }
    return 1;
}

} // namespace wsn
