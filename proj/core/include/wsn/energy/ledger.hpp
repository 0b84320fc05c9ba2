#pragma once

#include "wsn/sim/time.hpp"

#include <array>
#include <cstddef>

namespace wsn {

enum class Activity : std::size_t { Tx = 0, Rx, Idle, Sleep, Cpu };
inline constexpr std::size_t kActivityCount = 5;

const char* activityName(Activity a);

// Power draw per activity, in watts.
struct EnergyRates {
    double txW = 0.060;
    double rxW = 0.045;
    double idleW = 0.012;
    double sleepW = 0.00003;
    double cpuW = 0.006;

    double rate(Activity a) const;
};

// Per-node joule accounting. consume() is the only mutation path; remaining
// energy never increases.
class EnergyLedger {
public:
    EnergyLedger() = default;
    EnergyLedger(double initialJoules, EnergyRates rates);

    void consume(Activity a, SimTime durationSeconds);

    double consumed(Activity a) const { return perActivity_[static_cast<std::size_t>(a)]; }
    double totalConsumed() const;
    double remaining() const { return initial_ - totalConsumed(); }
    bool depleted() const { return remaining() <= 0.0; }
    double initialBudget() const { return initial_; }
    const EnergyRates& rates() const { return rates_; }

private:
    double initial_ = 0.0;
    EnergyRates rates_{};
    std::array<double, kActivityCount> perActivity_{};
};

} // namespace wsn
