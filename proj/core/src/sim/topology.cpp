#include "wsn/sim/topology.hpp"

#include "wsn/util/assert.hpp"

namespace wsn {

std::vector<Location> generateTopology(std::size_t count, const Rect& area, RngStream& rng) {
    WSN_ASSERT(count >= 1, "topology node count");
    WSN_ASSERT(area.width > 0.0 && area.height > 0.0, "degenerate deployment area");
    std::vector<Location> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = rng.uniform(0.0, area.width);
        const double y = rng.uniform(0.0, area.height);
        out.push_back({x, y});
    }
    return out;
}

} // namespace wsn
