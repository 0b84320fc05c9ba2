#include "wsn/sim/rng.hpp"

#include "wsn/util/assert.hpp"

#include <cmath>

namespace wsn {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t deriveStreamSeed(std::uint64_t seed, std::string_view streamId) {
    return splitmix64(seed ^ splitmix64(fnv1a(streamId)));
}

RngStream::RngStream(std::uint64_t seed, std::string_view streamId)
    : engine_(deriveStreamSeed(seed, streamId)), id_(streamId) {}

double RngStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t RngStream::uniformInt(std::uint64_t n) {
    WSN_ASSERT(n > 0, "uniformInt bound");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

bool RngStream::bernoulli(double p) {
    if (p <= 0.0)
        return false;
    if (p >= 1.0)
        return true;
    return uniform() < p;
}

double RngStream::gaussian() {
    if (hasSpare_) {
        hasSpare_ = false;
        return spare_;
    }
    double u1;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double twoPi = 2.0 * std::acos(-1.0);
    spare_ = mag * std::sin(twoPi * u2);
    hasSpare_ = true;
    return mag * std::cos(twoPi * u2);
}

} // namespace wsn
