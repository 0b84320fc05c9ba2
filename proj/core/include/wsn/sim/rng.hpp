#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace wsn {

// One independent, named random stream per (module, node). The draw functions
// are implemented directly on top of mt19937_64 so that identical
// (seed, streamId) pairs reproduce identical sequences on any platform;
// <random> distributions are implementation-defined and would break that.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view streamId);

    // Uniform double in [0, 1).
    double uniform();
    // Uniform double in [lo, hi).
    double uniform(double lo, double hi);
    // Uniform integer in [0, n); n must be > 0. Unbiased via rejection.
    std::uint64_t uniformInt(std::uint64_t n);
    bool bernoulli(double p);
    // Standard normal via Box-Muller.
    double gaussian();

    const std::string& id() const { return id_; }

private:
    std::mt19937_64 engine_;
    std::string id_;
    bool hasSpare_ = false;
    double spare_ = 0.0;
};

// Helper used to derive per-stream seeds; exposed for tests that re-derive
// draws independently.
std::uint64_t deriveStreamSeed(std::uint64_t seed, std::string_view streamId);

} // namespace wsn
