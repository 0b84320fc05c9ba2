#pragma once

#include "wsn/sim/geometry.hpp"

#include <span>

namespace wsn {

struct SensingParams {
    double sensingRadius = 30.0;
    double gridResolution = 5.0; // must be <= sensingRadius / 4
};

// True iff every grid sample point inside the node's sensing disk lies within
// the sensing disk of at least one awake neighbor. The grid is anchored at the
// node's own position with the configured pitch.
bool coverageRedundant(const Location& self, std::span<const Location> awakeNeighbors,
                       const SensingParams& params);

} // namespace wsn
