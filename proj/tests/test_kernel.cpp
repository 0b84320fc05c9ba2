#include "wsn/sim/channel.hpp"
#include "wsn/sim/event_queue.hpp"
#include "wsn/sim/geometry.hpp"
#include "wsn/sim/rng.hpp"
#include "wsn/sim/topology.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace wsn;

namespace {

struct StaticWorld final : NodeStateView {
    std::vector<Location> locs;
    std::vector<bool> aliveV;
    std::vector<bool> awakeV;

    explicit StaticWorld(std::vector<Location> l)
        : locs(std::move(l)), aliveV(locs.size(), true), awakeV(locs.size(), true) {}

    std::size_t nodeCount() const override { return locs.size(); }
    bool alive(NodeId n) const override { return aliveV[n]; }
    bool awake(NodeId n) const override { return awakeV[n]; }
    Location position(NodeId n) const override { return locs[n]; }
};

struct Sink final : ChannelListener {
    int frames = 0;
    void onBusyStart(SimTime) override {}
    void onBusyEnd(SimTime) override {}
    void onFrame(const Frame&, SimTime) override { ++frames; }
};

Frame beaconFrame(NodeId src) {
    Frame f;
    f.kind = FrameKind::Beacon;
    f.src = src;
    f.dst = kBroadcast;
    f.frameId = 1;
    f.sizeBytes = 40;
    f.body = BeaconBody{};
    return f;
}

double meanNearestNeighbor(const std::vector<Location>& pts) {
    double sum = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        double best = 1e30;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (j != i)
                best = std::min(best, distance(pts[i], pts[j]));
        sum += best;
    }
    return sum / static_cast<double>(pts.size());
}

} // namespace

TEST_CASE("event queue ordering") {
    EventQueue q;
    std::vector<int> fired;

    SUBCASE("schedule at now fires after the current event") {
        q.schedule(1.0, 0, "t", "a", [&](SimTime now) {
            fired.push_back(1);
            q.schedule(now, 0, "t", "b", [&](SimTime) { fired.push_back(2); });
        });
        q.runUntil(2.0);
        CHECK(fired == std::vector<int>{1, 2});
    }

    SUBCASE("identical timestamps fire in insertion order") {
        for (int i = 0; i < 8; ++i)
            q.schedule(3.0, 0, "t", "tie", [&fired, i](SimTime) { fired.push_back(i); });
        q.runUntil(3.0);
        CHECK(fired == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
    }

    SUBCASE("scheduling in the past is a causality violation") {
        q.schedule(5.0, 0, "t", "a", [&](SimTime now) {
            CHECK_THROWS_AS(q.schedule(now - 1.0, 0, "t", "late", [](SimTime) {}),
                            CausalityError);
        });
        q.runUntil(5.0);
    }

    SUBCASE("cancel prevents dispatch") {
        auto h = q.schedule(1.0, 0, "t", "a", [&](SimTime) { fired.push_back(1); });
        q.cancel(h);
        q.runUntil(2.0);
        CHECK(fired.empty());
        CHECK(q.empty());
    }

    SUBCASE("dispatch times are non-decreasing") {
        RngStream rng(7, "test/times");
        SimTime last = 0.0;
        bool ok = true;
        for (int i = 0; i < 1000; ++i)
            q.schedule(rng.uniform(0.0, 100.0), 0, "t", "x", [&](SimTime now) {
                ok = ok && now >= last;
                last = now;
            });
        q.runUntil(100.0);
        CHECK(ok);
    }
}

TEST_CASE("inRange boundary semantics") {
    CHECK(inRange({0, 0}, {3, 4}, 5.0));
    CHECK_FALSE(inRange({0, 0}, {3, 4}, 4.9));
    CHECK(inRange({2, 2}, {2, 2}, 0.0));
}

TEST_CASE("rng streams are independent and reproducible") {
    RngStream a(42, "alpha");
    RngStream b(42, "alpha");
    RngStream c(42, "beta");
    bool same = true;
    bool diverged = false;
    for (int i = 0; i < 1000; ++i) {
        const double va = a.uniform();
        same = same && va == b.uniform();
        diverged = diverged || va != c.uniform();
    }
    CHECK(same);
    CHECK(diverged);
}

TEST_CASE("topology generation") {
    const Rect area{200.0, 200.0};

    SUBCASE("single node lands inside the area") {
        RngStream rng(5, "topology");
        const auto pts = generateTopology(1, area, rng);
        REQUIRE(pts.size() == 1);
        CHECK(area.contains(pts[0]));
    }

    SUBCASE("same seed twice gives identical placements") {
        RngStream r1(9, "topology");
        RngStream r2(9, "topology");
        const auto a = generateTopology(50, area, r1);
        const auto b = generateTopology(50, area, r2);
        CHECK(a == b);
    }

    SUBCASE("mean nearest-neighbor distance matches an independent placement") {
        RngStream r1(11, "topology");
        const auto pts = generateTopology(1000, area, r1);
        // Brute-force oracle: same placement recipe, separate stream.
        RngStream r2(12, "oracle");
        std::vector<Location> oracle;
        for (int i = 0; i < 1000; ++i) {
            const double x = r2.uniform(0.0, area.width);
            oracle.push_back({x, r2.uniform(0.0, area.height)});
        }
        const double got = meanNearestNeighbor(pts);
        const double want = meanNearestNeighbor(oracle);
        CHECK(got == doctest::Approx(want).epsilon(0.05));
    }
}

TEST_CASE("channel broadcast delivery") {
    // 0 at origin; 1 in range; 2 out of range.
    StaticWorld world({{0, 0}, {10, 0}, {100, 0}});
    RadioModel radio; // 40 m, lossless

    SUBCASE("lossless broadcast reaches exactly the in-range awake nodes") {
        EventQueue q;
        Channel ch(q, world, radio, RngStream(1, "channel"));
        Sink s0, s1, s2;
        ch.attach(0, &s0);
        ch.attach(1, &s1);
        ch.attach(2, &s2);
        ch.transmit(0, beaconFrame(0));
        q.runUntil(1.0);
        CHECK(s0.frames == 0); // sender never hears itself
        CHECK(s1.frames == 1);
        CHECK(s2.frames == 0);
    }

    SUBCASE("sleeping receivers are excluded from the start snapshot") {
        EventQueue q;
        Channel ch(q, world, radio, RngStream(1, "channel"));
        Sink s1;
        ch.attach(1, &s1);
        world.awakeV[1] = false;
        ch.transmit(0, beaconFrame(0));
        q.runUntil(1.0);
        CHECK(s1.frames == 0);
        CHECK(ch.counters().sleepDeliveryViolations == 0);
    }

    SUBCASE("lossProbability 1 delivers nothing") {
        EventQueue q;
        radio.lossProbability = 1.0;
        Channel ch(q, world, radio, RngStream(1, "channel"));
        Sink s1;
        ch.attach(1, &s1);
        ch.transmit(0, beaconFrame(0));
        q.runUntil(1.0);
        CHECK(s1.frames == 0);
    }

    SUBCASE("lossProbability 0.5 receive fraction within 0.02 over 1e5 frames") {
        EventQueue q;
        radio.lossProbability = 0.5;
        Channel ch(q, world, radio, RngStream(3, "channel"));
        Sink s1;
        ch.attach(1, &s1);
        const int trials = 100000;
        for (int i = 0; i < trials; ++i) {
            const auto res = ch.transmit(0, beaconFrame(0));
            q.runUntil(res.endsAt);
        }
        const double fraction = static_cast<double>(s1.frames) / trials;
        CHECK(fraction == doctest::Approx(0.5).epsilon(0.04)); // +-0.02 absolute
    }
}
