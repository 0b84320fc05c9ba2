#include "wsn/loc/localization.hpp"

#include <algorithm>

namespace wsn {

const char* locationMethodName(LocationMethod m) {
    switch (m) {
    case LocationMethod::Truth: return "truth";
    case LocationMethod::Centroid: return "centroid";
    case LocationMethod::AreaRefined: return "areaRefined";
    case LocationMethod::InjectedError: return "injectedError";
    }
    return "?";
}

std::optional<LocationEstimate> centroidEstimate(const std::vector<AnchorBeacon>& heard) {
    if (heard.empty())
        return std::nullopt;
    LocationEstimate est;
    est.method = LocationMethod::Centroid;
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& b : heard) {
        sx += b.anchorLocation.x;
        sy += b.anchorLocation.y;
        est.heardAnchors.push_back(b.anchorId);
    }
    const double n = static_cast<double>(heard.size());
    est.position = {sx / n, sy / n};
    std::sort(est.heardAnchors.begin(), est.heardAnchors.end());
    return est;
}

LocationEstimate injectError(const Location& truth, double sigma, const Rect& area,
                             RngStream& rng) {
    LocationEstimate est;
    est.method = LocationMethod::InjectedError;
    est.sigma = sigma;
    est.position = area.clamp({truth.x + sigma * rng.gaussian(),
                               truth.y + sigma * rng.gaussian()});
    return est;
}

} // namespace wsn
