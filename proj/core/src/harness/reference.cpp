#include "wsn/harness/reference.hpp"

namespace wsn {

ScenarioConfig buildReferenceScenario() {
    ScenarioConfig c;
    c.name = "reference";
    c.durationSeconds = 30.0;

    c.topology.count = 100;
    c.topology.width = 200.0;
    c.topology.height = 200.0;
    c.topology.anchorFraction = 0.1;

    c.radio.rangeMeters = 40.0;
    c.radio.bitrateBps = 250000.0;
    c.radio.lossProbability = 0.0;

    c.routing.mode = RoutingMode::TableDriven;
    c.routing.setpointSpeed = 250.0;
    c.routing.bypassClass = 0; // single-class traffic: highest class is 0

    c.localization.method = LocalizationMethod::InjectedError;
    c.localization.sigmaMeters = 2.0;

    FlowConfig west;
    west.name = "westEast";
    west.source = {{15.0, 100.0}, 18.0};
    west.dest = {{185.0, 100.0}, 20.0};
    west.periodSeconds = 0.15;
    west.payloadBytes = 64;
    west.deadlineOffsetSeconds = 0.5;
    west.startTime = 3.0;
    west.stopTime = 27.0;

    FlowConfig south = west;
    south.name = "southNorth";
    south.source = {{100.0, 15.0}, 18.0};
    south.dest = {{100.0, 185.0}, 20.0};

    c.traffic.flows = {west, south};

    c.outputs.timeseries = true;
    c.outputs.packetTrace = false;
    c.outputs.sampleInterval = 1.0;
    return c;
}

} // namespace wsn
