#pragma once

#include "wsn/loc/localization.hpp"

#include <cstdint>

namespace wsn {

struct ErrorBoundResult {
    double meanError = 0.0;   // meters
    double p95Error = 0.0;    // meters
    double meanStdErr = 0.0;  // standard error of the mean
    int localizedTrials = 0;  // trials that heard at least one anchor
    int trials = 0;
    bool sparse = false;      // expected heard anchors < 1
};

// Monte-Carlo bound for centroid localization under uniform anchor placement
// with the given density (anchors per square meter). Deterministic per seed.
ErrorBoundResult errorBoundEstimate(double anchorDensity, double radioRange, int trials,
                                    std::uint64_t seed);

} // namespace wsn
