#pragma once

#include "wsn/sim/time.hpp"

namespace wsn {

struct MacParams {
    double slotTime = 0.0005;      // s, contention slot
    int cwMin = 8;                 // slots
    int cwMax = 64;                // slots
    int retryLimit = 5;            // R: retransmissions after the first attempt
    double ackTimeout = 0.003;     // s from data end to giving up on the ack
    int headerBytes = 16;          // h, charged once per frame
    double suspicionTimeout = 3.0; // s of silence before a neighbor is suspected
    double sweepPeriod = 1.0;      // s between suspicion sweeps
};

} // namespace wsn
