#pragma once

#include "wsn/harness/config.hpp"

namespace wsn {

// The shared experiment fixture: 100 nodes on a 200 m x 200 m field, 40 m
// radios, 10% anchors, and two crossing constant-rate flows (west-to-east and
// south-to-north) whose paths meet mid-field and push the MAC there toward
// saturation. Aggregation off, duty cycling off; differential experiments
// flip those via overrides. All numeric outcomes come from running it.
ScenarioConfig buildReferenceScenario();

} // namespace wsn
