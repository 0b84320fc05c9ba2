#pragma once

#include "wsn/sim/geometry.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/sim/time.hpp"

#include <optional>
#include <vector>

namespace wsn {

struct AnchorBeacon {
    NodeId anchorId = kNoNode;
    Location anchorLocation; // anchors self-know their true position
};

enum class LocationMethod { Truth, Centroid, AreaRefined, InjectedError };

const char* locationMethodName(LocationMethod m);

struct LocationEstimate {
    Location position;
    std::vector<NodeId> heardAnchors; // ascending
    LocationMethod method = LocationMethod::Centroid;
    double sigma = 0.0; // InjectedError only
};

// Arithmetic mean of heard anchor positions; nullopt when nothing was heard.
std::optional<LocationEstimate> centroidEstimate(const std::vector<AnchorBeacon>& heard);

// Receipt-constraint refinement: the node lies inside the radio disk of every
// anchor it heard and outside the disk of every anchor its neighbors heard
// that it did not. The estimate is the centroid of the grid cells (pitch =
// gridResolution) satisfying all constraints. Falls back to the plain
// centroid with fewer than three heard anchors or an empty region.
std::optional<LocationEstimate> areaRefine(const std::vector<AnchorBeacon>& heard,
                                           const std::vector<AnchorBeacon>& neighborHeard,
                                           double radioRange, const Rect& area,
                                           double gridResolution);

// Truth plus isotropic Gaussian noise, clamped to the deployment rectangle.
LocationEstimate injectError(const Location& truth, double sigma, const Rect& area,
                             RngStream& rng);

} // namespace wsn
