#include "wsn/aida/codec.hpp"
#include "wsn/harness/reference.hpp"
#include "wsn/harness/runner.hpp"
#include "wsn/sched/queue.hpp"
#include "wsn/sim/event_queue.hpp"
#include "wsn/sim/rng.hpp"

#include <benchmark/benchmark.h>

using namespace wsn;

static void BM_EventQueue(benchmark::State& state) {
    const int batch = static_cast<int>(state.range(0));
    RngStream rng(1, "bench/queue");
    for (auto _ : state) {
        EventQueue q;
        long fired = 0;
        for (int i = 0; i < batch; ++i)
            q.schedule(rng.uniform(0.0, 100.0), 0, "bench", "e",
                       [&fired](SimTime) { ++fired; });
        q.runUntil(100.0);
        benchmark::DoNotOptimize(fired);
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_EventQueue)->Arg(1000)->Arg(10000);

static void BM_VelocityQueue(benchmark::State& state) {
    const int batch = static_cast<int>(state.range(0));
    RngStream rng(2, "bench/sched");
    std::vector<PacketPtr> packets;
    for (int i = 0; i < batch; ++i) {
        auto p = std::make_shared<Packet>();
        p->id = static_cast<PacketId>(i + 1);
        p->dest.center = {rng.uniform(0.0, 200.0), rng.uniform(0.0, 200.0)};
        p->deadline = rng.uniform(0.5, 2.0);
        p->priorityClass = static_cast<int>(rng.uniformInt(3));
        packets.push_back(std::move(p));
    }
    const Location here{100.0, 100.0};
    std::vector<PacketPtr> expired;
    for (auto _ : state) {
        VelocityQueue q({batch});
        for (const auto& p : packets)
            q.enqueue(p, 0.0, here);
        while (true) {
            expired.clear();
            auto next = q.dequeue(0.0, here, expired);
            if (!next)
                break;
            benchmark::DoNotOptimize(*next);
        }
    }
    state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_VelocityQueue)->Arg(16)->Arg(64);

static void BM_AidaCodec(benchmark::State& state) {
    RngStream rng(3, "bench/codec");
    std::vector<std::vector<std::uint8_t>> units(6);
    for (auto& u : units) {
        u.resize(32 + rng.uniformInt(96));
        for (auto& b : u)
            b = static_cast<std::uint8_t>(rng.uniformInt(256));
    }
    for (auto _ : state) {
        const auto wire = aida::encodeFrame(units);
        const auto back = aida::decodeFrame(wire);
        benchmark::DoNotOptimize(back);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(units.size()));
}
BENCHMARK(BM_AidaCodec);

static void BM_ReferenceRunShort(benchmark::State& state) {
    ScenarioConfig config = buildReferenceScenario();
    config.durationSeconds = 5.0;
    config.outputs.timeseries = false;
    for (auto _ : state) {
        const RunMetrics m = runScenario(config, 1);
        benchmark::DoNotOptimize(m.delivered);
    }
}
BENCHMARK(BM_ReferenceRunShort)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
