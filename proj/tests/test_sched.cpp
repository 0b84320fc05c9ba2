#include "doctest.h"

#include "wsn/sched/queue.hpp"
#include "wsn/sim/rng.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

using namespace wsn;

namespace {

PacketPtr makePacket(PacketId id, Location dest, SimTime deadline, int cls,
                     SimTime createdAt = 0.0) {
    auto p = std::make_shared<Packet>();
    p->id = id;
    p->dest.center = dest;
    p->dest.radiusMeters = 0.0;
    p->deadline = deadline;
    p->priorityClass = cls;
    p->createdAt = createdAt;
    p->ttlRemaining = 16;
    return p;
}

// Reference drain: sort by (class desc, velocity desc, arrival order asc)
// with keys frozen at `now`, expired entries removed first.
std::vector<PacketId> oracleDrain(std::vector<PacketPtr> packets, SimTime now, Location here) {
    std::vector<std::tuple<int, double, std::size_t, PacketId>> keyed;
    for (std::size_t i = 0; i < packets.size(); ++i) {
        auto v = requiredVelocity(*packets[i], now, here);
        if (!v)
            continue; // deadline passed
        keyed.emplace_back(-packets[i]->priorityClass, -*v, i, packets[i]->id);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<PacketId> out;
    for (const auto& k : keyed)
        out.push_back(std::get<3>(k));
    return out;
}

} // namespace

TEST_CASE("required velocity is distance over remaining time") {
    auto p = makePacket(1, {100.0, 0.0}, 2.0, 0);
    const Location here{0.0, 0.0};
    auto v = requiredVelocity(*p, 0.0, here);
    REQUIRE(v.has_value());
    CHECK(*v == doctest::Approx(50.0));
    v = requiredVelocity(*p, 1.5, here);
    CHECK(*v == doctest::Approx(200.0));
    CHECK_FALSE(requiredVelocity(*p, 2.0, here).has_value());
    CHECK_FALSE(requiredVelocity(*p, 2.5, here).has_value());
}

TEST_CASE("dequeue order matches the sort oracle over random snapshots") {
    RngStream rng(99, "schedtest");
    const Location here{0.0, 0.0};
    for (int trial = 0; trial < 1000; ++trial) {
        VelocityQueue q{QueueParams{256}};
        const int n = 1 + static_cast<int>(rng.uniformInt(24));
        const SimTime now = rng.uniform(0.0, 10.0);
        std::vector<PacketPtr> entered;
        for (int i = 0; i < n; ++i) {
            const Location dest{rng.uniform(-200.0, 200.0), rng.uniform(-200.0, 200.0)};
            const SimTime deadline = now + rng.uniform(-0.2, 2.0);
            const int cls = static_cast<int>(rng.uniformInt(3));
            auto p = makePacket(static_cast<PacketId>(trial * 100 + i), dest, deadline, cls);
            if (q.enqueue(p, now, here).outcome !=
                VelocityQueue::EnqueueOutcome::ExpiredOnArrival)
                entered.push_back(p);
        }

        std::vector<PacketId> expect = oracleDrain(entered, now, here);
        std::vector<PacketId> got;
        std::vector<PacketPtr> expired;
        while (auto p = q.dequeue(now, here, expired))
            got.push_back((*p)->id);
        CHECK(got == expect);
        CHECK(expired.empty()); // keys were valid at enqueue and clock did not move
    }
}

TEST_CASE("expiry between enqueue and dequeue is routed to expiredOut") {
    VelocityQueue q;
    const Location here{0.0, 0.0};
    auto live = makePacket(1, {50.0, 0.0}, 10.0, 0);
    auto dying = makePacket(2, {50.0, 0.0}, 1.0, 0);
    q.enqueue(live, 0.0, here);
    q.enqueue(dying, 0.0, here);
    std::vector<PacketPtr> expired;
    auto got = q.dequeue(2.0, here, expired);
    REQUIRE(got.has_value());
    CHECK((*got)->id == 1);
    REQUIRE(expired.size() == 1);
    CHECK(expired[0]->id == 2);
    CHECK(q.empty());
}

TEST_CASE("enqueue rejects packets already past deadline") {
    VelocityQueue q;
    const Location here{0.0, 0.0};
    auto late = makePacket(1, {50.0, 0.0}, 1.0, 0);
    auto r = q.enqueue(late, 1.5, here);
    CHECK(r.outcome == VelocityQueue::EnqueueOutcome::ExpiredOnArrival);
    CHECK(q.empty());
}

TEST_CASE("a full queue evicts the lexicographic minimum of queue plus arrival") {
    const Location here{0.0, 0.0};

    SUBCASE("weakest resident is displaced by a stronger arrival") {
        VelocityQueue q{QueueParams{2}};
        auto slow = makePacket(1, {10.0, 0.0}, 10.0, 0);  // v = 1
        auto mid = makePacket(2, {100.0, 0.0}, 1.0, 0);   // v = 100
        auto fast = makePacket(3, {150.0, 0.0}, 1.0, 0);  // v = 150
        q.enqueue(slow, 0.0, here);
        q.enqueue(mid, 0.0, here);
        auto r = q.enqueue(fast, 0.0, here);
        CHECK(r.outcome == VelocityQueue::EnqueueOutcome::AcceptedWithEviction);
        REQUIRE(r.evicted);
        CHECK(r.evicted->id == 1);
        CHECK(q.size() == 2);
    }

    SUBCASE("arrival weaker than every resident evicts itself") {
        VelocityQueue q{QueueParams{2}};
        auto a = makePacket(1, {100.0, 0.0}, 1.0, 1);
        auto b = makePacket(2, {100.0, 0.0}, 1.0, 1);
        auto weak = makePacket(3, {5.0, 0.0}, 10.0, 0);
        q.enqueue(a, 0.0, here);
        q.enqueue(b, 0.0, here);
        auto r = q.enqueue(weak, 0.0, here);
        CHECK(r.outcome == VelocityQueue::EnqueueOutcome::AcceptedWithEviction);
        REQUIRE(r.evicted);
        CHECK(r.evicted->id == 3);
        CHECK(q.size() == 2);
    }
}

TEST_CASE("priority class dominates required velocity") {
    VelocityQueue q;
    const Location here{0.0, 0.0};
    auto lowClassFast = makePacket(1, {199.0, 0.0}, 1.0, 0);
    auto highClassSlow = makePacket(2, {10.0, 0.0}, 10.0, 1);
    q.enqueue(lowClassFast, 0.0, here);
    q.enqueue(highClassSlow, 0.0, here);
    std::vector<PacketPtr> expired;
    CHECK((*q.dequeue(0.0, here, expired))->id == 2);
    CHECK((*q.dequeue(0.0, here, expired))->id == 1);
}

TEST_CASE("keys decay as the clock advances") {
    VelocityQueue q;
    const Location here{0.0, 0.0};
    // Near deadline at t=0: b wins. At t=0.9 a's velocity exploded past b's.
    auto a = makePacket(1, {50.0, 0.0}, 1.0, 0);   // v(0)=50,  v(0.9)=500
    auto b = makePacket(2, {120.0, 0.0}, 2.0, 0);  // v(0)=60,  v(0.9)=109
    q.enqueue(a, 0.0, here);
    q.enqueue(b, 0.0, here);
    std::vector<PacketPtr> expired;
    auto first = q.dequeue(0.9, here, expired);
    REQUIRE(first.has_value());
    CHECK((*first)->id == 1);
}
