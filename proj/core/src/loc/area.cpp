#include "wsn/loc/localization.hpp"

#include "wsn/util/assert.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace wsn {

std::optional<LocationEstimate> areaRefine(const std::vector<AnchorBeacon>& heard,
                                           const std::vector<AnchorBeacon>& neighborHeard,
                                           double radioRange, const Rect& area,
                                           double gridResolution) {
    WSN_ASSERT(radioRange > 0 && gridResolution > 0, "bad areaRefine inputs");
    if (heard.size() < 3)
        return centroidEstimate(heard);

    std::set<NodeId> own;
    for (const auto& b : heard)
        own.insert(b.anchorId);
    std::vector<Location> outside; // anchors audible nearby that we missed
    std::set<NodeId> seen;
    for (const auto& b : neighborHeard)
        if (!own.count(b.anchorId) && seen.insert(b.anchorId).second)
            outside.push_back(b.anchorLocation);

    const int nx = std::max(1, static_cast<int>(std::floor(area.width / gridResolution)));
    const int ny = std::max(1, static_cast<int>(std::floor(area.height / gridResolution)));
    double sx = 0.0;
    double sy = 0.0;
    std::size_t cells = 0;
    for (int ix = 0; ix <= nx; ++ix) {
        for (int iy = 0; iy <= ny; ++iy) {
            const Location cell{ix * gridResolution, iy * gridResolution};
            bool ok = true;
            for (const auto& b : heard) {
                if (!inRange(cell, b.anchorLocation, radioRange)) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            for (const auto& loc : outside) {
                if (inRange(cell, loc, radioRange)) {
                    ok = false;
                    break;
                }
            }
            if (!ok)
                continue;
            sx += cell.x;
            sy += cell.y;
            ++cells;
        }
    }
    if (cells == 0)
        return centroidEstimate(heard);

    LocationEstimate est;
    est.method = LocationMethod::AreaRefined;
    est.position = area.clamp({sx / static_cast<double>(cells), sy / static_cast<double>(cells)});
    for (const auto& b : heard)
        est.heardAnchors.push_back(b.anchorId);
    std::sort(est.heardAnchors.begin(), est.heardAnchors.end());
    return est;
}

} // namespace wsn
