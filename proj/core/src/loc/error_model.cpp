#include "wsn/loc/error_model.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace wsn {

ErrorBoundResult errorBoundEstimate(double anchorDensity, double radioRange, int trials,
                                    std::uint64_t seed) {
    WSN_ASSERT(anchorDensity > 0 && radioRange > 0, "bad density or range");
    WSN_ASSERT(trials >= 1000, "too few trials for a stable bound");

    // Field large enough that the node's hearing disk never clips the border.
    const double side = 8.0 * radioRange;
    const int anchors =
        std::max(1, static_cast<int>(std::llround(anchorDensity * side * side)));

    RngStream rng(seed, "loc/errorBound");
    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(trials));
    for (int t = 0; t < trials; ++t) {
        const Location node{rng.uniform(radioRange, side - radioRange),
                            rng.uniform(radioRange, side - radioRange)};
        double sx = 0.0;
        double sy = 0.0;
        int heard = 0;
        for (int a = 0; a < anchors; ++a) {
            const Location loc{rng.uniform(0.0, side), rng.uniform(0.0, side)};
            if (inRange(node, loc, radioRange)) {
                sx += loc.x;
                sy += loc.y;
                ++heard;
            }
        }
        if (heard == 0)
            continue;
        const Location est{sx / heard, sy / heard};
        errors.push_back(distance(node, est));
    }

    ErrorBoundResult result;
    result.trials = trials;
    result.localizedTrials = static_cast<int>(errors.size());
    result.sparse = anchorDensity * std::numbers::pi * radioRange * radioRange < 1.0;
    if (errors.empty())
        return result;

    double sum = 0.0;
    for (double e : errors)
        sum += e;
    result.meanError = sum / static_cast<double>(errors.size());
    double var = 0.0;
    for (double e : errors)
        var += (e - result.meanError) * (e - result.meanError);
    if (errors.size() > 1)
        var /= static_cast<double>(errors.size() - 1);
    result.meanStdErr = std::sqrt(var / static_cast<double>(errors.size()));

    std::sort(errors.begin(), errors.end());
    const auto rank = static_cast<std::size_t>(
        std::ceil(0.95 * static_cast<double>(errors.size())));
    result.p95Error = errors[std::min(errors.size() - 1, rank == 0 ? 0 : rank - 1)];
    return result;
}

} // namespace wsn
