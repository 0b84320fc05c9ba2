#pragma once

namespace wsn {

enum class RoutingMode {
    TableDriven, // beacon-fed neighbor table, setpoint + feedback
    Greedy,      // baseline: argmax relay speed, no setpoint, no feedback
    LazyBinding  // state-free receiver-side relay election
};

const char* routingModeName(RoutingMode mode);

struct RoutingParams {
    RoutingMode mode = RoutingMode::TableDriven;
    double setpointSpeed = 250.0;     // S, m/s delivery-speed target
    double weightExponent = 2.0;      // K in speed^K sampling
    double beaconPeriod = 1.0;        // B, s
    double neighborTimeout = 3.0;     // s without a beacon before eviction
    double minDelay = 0.001;          // delta_min, s; also the optimistic prior
    int ttl = 32;                     // hop budget
    double sectorHalfAngleDeg = 60.0; // theta, lazy-binding sector
    double ctsWindow = 0.010;         // T_cts, s, response election window
    double admissionThreshold = 1.0;  // uAdm; 1.0 disables policing
    int bypassClass = 1 << 30;        // classes >= this skip admission control
    double backpressureFactor = 2.0;  // beta, delay inflation on backpressure
    double missAlpha = 0.3;           // smoothing for the local miss-ratio EWMA
};

} // namespace wsn
