#include "wsn/energy/coverage.hpp"

#include "wsn/util/assert.hpp"

#include <cmath>

namespace wsn {

bool coverageRedundant(const Location& self, std::span<const Location> awakeNeighbors,
                       const SensingParams& params) {
    WSN_ASSERT(params.sensingRadius > 0.0, "sensing radius");
    WSN_ASSERT(params.gridResolution > 0.0 &&
                   params.gridResolution <= params.sensingRadius / 4.0 + 1e-9,
               "coverage grid pitch must be <= sensingRadius/4");
    if (awakeNeighbors.empty())
        return false;

    const double r = params.sensingRadius;
    const double g = params.gridResolution;
    const int steps = static_cast<int>(std::ceil(r / g));
    for (int i = -steps; i <= steps; ++i) {
        for (int j = -steps; j <= steps; ++j) {
            const Location p{self.x + i * g, self.y + j * g};
            if (!inRange(p, self, r))
                continue;
            bool covered = false;
            for (const Location& nb : awakeNeighbors) {
                if (inRange(p, nb, r)) {
                    covered = true;
                    break;
                }
            }
            if (!covered)
                return false;
        }
    }
    return true;
}

} // namespace wsn
