#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "causal/baselines.hpp"

using namespace causal;

namespace {

const ProcessId kI{1};
const ProcessId kJ{2};
const ProcessId kK{3};

WireMessage ack(ProcessId src, ProcessId dst, MsgId mid) {
    return make_control(WireKind::Ack, src, dst, mid);
}

WireMessage yct(ProcessId src, ProcessId dst, MsgId mid) {
    return make_control(WireKind::Yct, src, dst, mid);
}

}  // namespace

TEST_CASE("stop and wait keeps one message in flight") {
    MfProcess p(kI);
    auto o1 = p.causal_send({kJ}, "a");
    REQUIRE(o1.size() == 1);
    CHECK(p.in_flight());
    auto o2 = p.causal_send({kJ}, "b");
    CHECK(o2.empty());
    auto o3 = p.causal_send({kK}, "c");
    CHECK(o3.empty());
    CHECK(p.send_buffer_size() == 2);

    auto r1 = p.on_wire(ack(kJ, kI, 1));
    REQUIRE(r1.out.size() == 1);
    CHECK(r1.out[0].kind == WireKind::Msg);
    CHECK(r1.out[0].mid == 2);
    CHECK(r1.out[0].dst == kJ);

    auto r2 = p.on_wire(ack(kJ, kI, 2));
    REQUIRE(r2.out.size() == 1);
    CHECK(r2.out[0].mid == 3);
    CHECK(r2.out[0].dst == kK);

    auto r3 = p.on_wire(ack(kK, kI, 3));
    CHECK(r3.out.empty());
    CHECK(p.quiescent());
}

TEST_CASE("stop and wait delivers immediately and re-acks duplicates") {
    MfProcess p(kI);
    auto r1 = p.on_wire(make_msg(kJ, kI, 1, 0, false, "a"));
    REQUIRE(r1.delivered.size() == 1);
    REQUIRE(r1.out.size() == 1);
    CHECK(r1.out[0].kind == WireKind::Ack);
    auto r2 = p.on_wire(make_msg(kJ, kI, 1, 0, false, "a"));
    CHECK(r2.delivered.empty());
    REQUIRE(r2.out.size() == 1);
    CHECK(r2.out[0].kind == WireKind::Ack);
}

TEST_CASE("stop and wait timer retransmits the flight message") {
    MfProcess p(kI);
    CHECK(p.on_timer().empty());
    p.causal_send({kJ}, "a");
    auto out = p.on_timer();
    REQUIRE(out.size() == 1);
    CHECK(out[0].kind == WireKind::Msg);
    CHECK(out[0].mid == 1);
}

TEST_CASE("stale ack does not release the next message") {
    MfProcess p(kI);
    p.causal_send({kJ}, "a");
    p.causal_send({kJ}, "b");
    auto r = p.on_wire(ack(kJ, kI, 7));
    CHECK(r.out.empty());
    CHECK(p.in_flight());
}

TEST_CASE("eager flag set exactly when earlier sends are unacked") {
    CykasProcess p(kI);
    auto o1 = p.causal_send({kJ}, "a");
    REQUIRE(o1.size() == 1);
    CHECK(o1[0].eager == false);
    auto o2 = p.causal_send({kK}, "b");
    REQUIRE(o2.size() == 1);
    CHECK(o2[0].eager == true);
    CHECK(p.unacked_sent() == 2);
}

TEST_CASE("one in-flight message per destination") {
    CykasProcess p(kI);
    auto o1 = p.causal_send({kJ}, "a");
    REQUIRE(o1.size() == 1);
    auto o2 = p.causal_send({kJ}, "b");
    CHECK(o2.empty());  // head blocked on the same destination
    auto o3 = p.causal_send({kK}, "c");
    CHECK(o3.empty());  // whole-buffer head blocking
    auto r = p.on_wire(ack(kJ, kI, 1));
    // b and c both release; b eager (c... nothing unacked before b now),
    // c eager (b unacked).
    REQUIRE(r.out.size() == 2);
    CHECK(r.out[0].mid == 2);
    CHECK(r.out[0].dst == kJ);
    CHECK(r.out[0].eager == false);
    CHECK(r.out[1].mid == 3);
    CHECK(r.out[1].dst == kK);
    CHECK(r.out[1].eager == true);
}

TEST_CASE("eager receive raises the mode counter and blocks sends") {
    CykasProcess p(kI);
    WireMessage w = make_msg(kJ, kI, 1, 0, false, "m");
    w.eager = true;
    auto r = p.on_wire(w);
    REQUIRE(r.delivered.size() == 1);  // delivered immediately regardless
    CHECK(p.mode() == 1);

    auto out = p.causal_send({kK}, "reply");
    CHECK(out.empty());  // secret mode holds the buffer

    auto ry = p.on_wire(yct(kJ, kI, 1));
    CHECK(p.mode() == 0);
    REQUIRE(ry.out.size() == 1);
    CHECK(ry.out[0].kind == WireKind::Msg);
    CHECK(ry.out[0].dst == kK);
}

TEST_CASE("yct fires when the eager entry's predecessors are acked") {
    CykasProcess p(kI);
    p.causal_send({kJ}, "a");   // mid 1, not eager
    auto o2 = p.causal_send({kK}, "b");  // mid 2, eager
    REQUIRE(o2.size() == 1);
    CHECK(o2[0].eager == true);

    // b's ack first: prefix still blocked by a, no yct yet.
    auto r2 = p.on_wire(ack(kK, kI, 2));
    CHECK(r2.out.empty());
    // a's ack pops it; b becomes the oldest entry with everything before
    // it acked, its you-can-tell goes out.
    auto r1 = p.on_wire(ack(kJ, kI, 1));
    REQUIRE(r1.out.size() == 1);
    CHECK(r1.out[0].kind == WireKind::Yct);
    CHECK(r1.out[0].dst == kK);
    CHECK(r1.out[0].mid == 2);
    CHECK(p.quiescent());
}

TEST_CASE("yct fires for a still-unacked entry that becomes oldest") {
    CykasProcess p(kI);
    p.causal_send({kJ}, "a");            // mid 1
    auto o2 = p.causal_send({kK}, "b");  // mid 2, eager
    REQUIRE(o2.size() == 1);
    auto r1 = p.on_wire(ack(kJ, kI, 1));
    // b is now the oldest and everything before it is acked, so its yct
    // goes out even though b itself is unacked.
    REQUIRE(r1.out.size() == 1);
    CHECK(r1.out[0].kind == WireKind::Yct);
    CHECK(r1.out[0].mid == 2);
    auto r2 = p.on_wire(ack(kK, kI, 2));
    CHECK(r2.out.empty());  // no second yct
    CHECK(p.quiescent());
}

TEST_CASE("yct in normal mode is an anomaly") {
    CykasProcess p(kI);
    p.on_wire(yct(kJ, kI, 1));
    CHECK(p.anomalies() == 1);
}

TEST_CASE("mode counter nests") {
    CykasProcess p(kI);
    WireMessage w1 = make_msg(kJ, kI, 1, 0, false, "m");
    w1.eager = true;
    WireMessage w2 = make_msg(kK, kI, 1, 0, false, "m");
    w2.eager = true;
    p.on_wire(w1);
    p.on_wire(w2);
    CHECK(p.mode() == 2);
    p.causal_send({kJ}, "r");
    auto ry1 = p.on_wire(yct(kJ, kI, 1));
    CHECK(ry1.out.empty());  // still in secret mode
    CHECK(p.mode() == 1);
    auto ry2 = p.on_wire(yct(kK, kI, 1));
    CHECK(p.mode() == 0);
    REQUIRE(ry2.out.size() == 1);
    CHECK(ry2.out[0].kind == WireKind::Msg);
}

TEST_CASE("cykas timer is silent") {
    CykasProcess p(kI);
    p.causal_send({kJ}, "a");
    CHECK(p.on_timer().empty());
}
