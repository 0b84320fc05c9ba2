#pragma once

#include "wsn/sim/geometry.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/sim/time.hpp"

#include <vector>

namespace wsn {

// Uniform i.i.d. placement over the deployment rectangle. Node ids are the
// vector indices; the draw order (x then y per node) is part of the
// determinism contract.
std::vector<Location> generateTopology(std::size_t count, const Rect& area, RngStream& rng);

} // namespace wsn
