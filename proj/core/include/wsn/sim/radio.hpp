#pragma once

#include "wsn/sim/time.hpp"

namespace wsn {

// Unit-disk radio with independent per-frame Bernoulli loss per receiver.
struct RadioModel {
    double rangeMeters = 40.0;
    double bitrateBps = 250000.0;
    double lossProbability = 0.0;

    SimTime airtimeSeconds(int sizeBytes) const {
        return static_cast<double>(sizeBytes) * 8.0 / bitrateBps;
    }
};

} // namespace wsn
