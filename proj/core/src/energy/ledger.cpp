#include "wsn/energy/ledger.hpp"

#include "wsn/util/assert.hpp"

#include <numeric>

namespace wsn {

const char* activityName(Activity a) {
    switch (a) {
    case Activity::Tx: return "tx";
    case Activity::Rx: return "rx";
    case Activity::Idle: return "idle";
    case Activity::Sleep: return "sleep";
    case Activity::Cpu: return "cpu";
    }
    return "?";
}

double EnergyRates::rate(Activity a) const {
    switch (a) {
    case Activity::Tx: return txW;
    case Activity::Rx: return rxW;
    case Activity::Idle: return idleW;
    case Activity::Sleep: return sleepW;
    case Activity::Cpu: return cpuW;
    }
    return 0.0;
}

EnergyLedger::EnergyLedger(double initialJoules, EnergyRates rates)
    : initial_(initialJoules), rates_(rates) {}

void EnergyLedger::consume(Activity a, SimTime durationSeconds) {
    WSN_ASSERT(durationSeconds >= 0.0, "negative consume duration");
    perActivity_[static_cast<std::size_t>(a)] += rates_.rate(a) * durationSeconds;
}

double EnergyLedger::totalConsumed() const {
    return std::accumulate(perActivity_.begin(), perActivity_.end(), 0.0);
}

} // namespace wsn
