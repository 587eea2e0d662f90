#include "causal/scenarios.hpp"

#include <stdexcept>

namespace causal {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void fixed_default(NetConfig& cfg, Tick latency) {
    cfg.latency_min = latency;
    cfg.latency_max = latency;
    cfg.loss_prob = 0.0;
    cfg.dup_prob = 0.0;
    cfg.reorder_jitter = 0;
}

void sym_link(NetConfig& cfg, std::uint64_t a, std::uint64_t b, Tick latency) {
    cfg.link_latency[{a, b}] = {latency, latency};
    cfg.link_latency[{b, a}] = {latency, latency};
}

std::vector<ProcessId> procs(std::uint64_t n) {
    std::vector<ProcessId> out;
    for (std::uint64_t i = 1; i <= n; ++i) {
        out.push_back(ProcessId{i});
    }
    return out;
}

// Six processes: 1 and 2 send to 3 with side traffic pending, 3 relays
// a dependent message to 6. Latencies are chosen so the release trigger
// differs per engine: the second permit for the basic engine, the last
// mode-clearing control message for cykas.
Scenario residency_order() {
    Scenario s;
    s.name = "residency_order";
    s.config.seed = 42;
    fixed_default(s.config, 100);
    s.config.timer_period = 5000;
    sym_link(s.config, 1, 4, 400);
    sym_link(s.config, 2, 5, 300);
    sym_link(s.config, 2, 4, 500);
    sym_link(s.config, 2, 3, 50);
    s.processes = procs(6);
    s.script = {
        {0, ProcessId{1}, {ProcessId{4}}, "p1"},
        {0, ProcessId{2}, {ProcessId{5}}, "q1"},
        {100, ProcessId{1}, {ProcessId{3}}, "a"},
        {100, ProcessId{2}, {ProcessId{3}}, "b"},
        {215, ProcessId{2}, {ProcessId{4}}, "q2"},
        {250, ProcessId{3}, {ProcessId{6}}, "m"},
        {300, ProcessId{2}, {ProcessId{3}}, "c"},
    };
    s.tick_limit = 100000;
    return s;
}

// Processes 1 and 2 alternate side-sends (slow acks) with sends to 3,
// so every message 3 receives was sent with acks outstanding. The
// clearing control messages arrive staggered such that 3 never leaves
// secret mode while the script runs; message m stays buffered.
Scenario cykas_starvation() {
    Scenario s;
    s.name = "cykas_starvation";
    s.config.seed = 7;
    fixed_default(s.config, 100);
    s.config.timer_period = 1000;
    sym_link(s.config, 1, 3, 40);
    sym_link(s.config, 2, 3, 40);
    sym_link(s.config, 1, 4, 110);
    sym_link(s.config, 2, 5, 110);
    sym_link(s.config, 3, 6, 40);
    s.processes = procs(6);
    s.script.push_back({100, ProcessId{3}, {ProcessId{6}}, "m"});
    constexpr Tick kPeriod = 250;
    constexpr std::uint64_t kPairs = 225;
    for (std::uint64_t n = 0; n < kPairs; ++n) {
        Tick base = n * kPeriod;
        s.script.push_back({base, ProcessId{1}, {ProcessId{4}}, "x"});
        s.script.push_back({base + 10, ProcessId{1}, {ProcessId{3}}, "a"});
        s.script.push_back({base + 125, ProcessId{2}, {ProcessId{5}}, "y"});
        s.script.push_back({base + 135, ProcessId{2}, {ProcessId{3}}, "b"});
    }
    s.tick_limit = 200000;
    return s;
}

// One message to {2,3} with a slow link to 3, then 2 relays to 3. Run
// under a unicast engine the relay overtakes the slow copy; the
// multicast engine holds the relay until both copies are acked.
Scenario multicast_counterexample() {
    Scenario s;
    s.name = "multicast_counterexample";
    s.config.seed = 5;
    fixed_default(s.config, 50);
    s.config.timer_period = 5000;
    sym_link(s.config, 1, 3, 500);
    s.processes = procs(3);
    s.script = {
        {0, ProcessId{1}, {ProcessId{2}, ProcessId{3}}, "m"},
        {150, ProcessId{2}, {ProcessId{3}}, "m3"},
    };
    s.tick_limit = 100000;
    s.engine = EngineKind::Multicast;
    return s;
}

// Two same-receiver messages then a dependent relay: the second message
// needs no permit when only same-receiver acks are outstanding.
Scenario improvement1() {
    Scenario s;
    s.name = "improvement1";
    s.config.seed = 11;
    fixed_default(s.config, 50);
    s.config.timer_period = 5000;
    s.processes = procs(3);
    s.script = {
        {0, ProcessId{1}, {ProcessId{2}}, "m1"},
        {10, ProcessId{1}, {ProcessId{2}}, "m2"},
        {100, ProcessId{2}, {ProcessId{3}}, "m3"},
    };
    s.tick_limit = 100000;
    s.engine = EngineKind::SpsOptimal;
    return s;
}

// A flagged message whose only outstanding foreign ack clears early:
// its permit can go out before the slow same-receiver ack arrives.
Scenario improvement2() {
    Scenario s;
    s.name = "improvement2";
    s.config.seed = 12;
    fixed_default(s.config, 50);
    s.config.timer_period = 5000;
    sym_link(s.config, 1, 2, 50);
    s.config.link_latency[{2, 1}] = {1000, 1000};
    s.processes = procs(3);
    s.script = {
        {0, ProcessId{1}, {ProcessId{2}}, "m1"},
        {10, ProcessId{1}, {ProcessId{3}}, "m2"},
        {20, ProcessId{1}, {ProcessId{2}}, "m3"},
        {200, ProcessId{2}, {ProcessId{3}}, "m4"},
    };
    s.tick_limit = 100000;
    s.engine = EngineKind::SpsOptimal;
    return s;
}

// The only missing permit is from the reply's own destination: the
// reply can be network-sent without waiting for it.
Scenario improvement3() {
    Scenario s;
    s.name = "improvement3";
    s.config.seed = 13;
    fixed_default(s.config, 50);
    s.config.timer_period = 5000;
    s.config.link_latency[{3, 1}] = {1000, 1000};
    s.processes = procs(3);
    s.script = {
        {0, ProcessId{1}, {ProcessId{3}}, "m0"},
        {10, ProcessId{1}, {ProcessId{2}}, "m1"},
        {100, ProcessId{2}, {ProcessId{1}}, "m5"},
    };
    s.tick_limit = 100000;
    s.engine = EngineKind::SpsOptimal;
    return s;
}

// Continuous single-pair load: one message every 20 ticks on a
// fixed-100-tick link. Stop-and-wait throughput pins to one message
// per round trip.
Scenario mf_load() {
    Scenario s;
    s.name = "mf_load";
    s.config.seed = 3;
    fixed_default(s.config, 100);
    s.config.timer_period = 5000;
    s.processes = procs(2);
    for (std::uint64_t n = 0; n < 200; ++n) {
        s.script.push_back({n * 20, ProcessId{1}, {ProcessId{2}}, "m"});
    }
    s.tick_limit = 200000;
    s.engine = EngineKind::Mf;
    return s;
}

Scenario random_base(std::uint64_t seed, std::uint32_t n,
                     std::uint32_t messages, FaultProfile profile,
                     bool mcast) {
    if (n < 2) {
        throw std::invalid_argument("random scenario needs >= 2 processes");
    }
    Scenario s;
    s.config.seed = seed;
    switch (profile) {
        case FaultProfile::None:
            s.config.loss_prob = 0.0;
            s.config.dup_prob = 0.0;
            s.config.reorder_jitter = 0;
            break;
        case FaultProfile::Light:
            s.config.loss_prob = 0.05;
            s.config.dup_prob = 0.02;
            s.config.reorder_jitter = 100;
            break;
        case FaultProfile::Heavy:
            s.config.loss_prob = 0.2;
            s.config.dup_prob = 0.1;
            s.config.reorder_jitter = 400;
            break;
    }
    s.processes = procs(n);
    std::uint64_t rng = seed ^ 0xa076bc5c9d03fe21ULL;
    Tick t = 0;
    for (std::uint32_t i = 0; i < messages; ++i) {
        t += splitmix64(rng) % 50;
        ProcessId src{1 + splitmix64(rng) % n};
        std::vector<ProcessId> dsts;
        std::size_t want = mcast ? 1 + splitmix64(rng) % 3 : 1;
        while (dsts.size() < want && dsts.size() < n - 1) {
            ProcessId d{1 + splitmix64(rng) % n};
            if (d == src) {
                continue;
            }
            bool dup = false;
            for (ProcessId e : dsts) {
                if (e == d) {
                    dup = true;
                }
            }
            if (!dup) {
                dsts.push_back(d);
            }
        }
        s.script.push_back({t, src, std::move(dsts), "p"});
    }
    s.tick_limit = 1000000;
    return s;
}

}  // namespace

FaultProfile fault_profile_from_name(const std::string& name) {
    if (name == "none") return FaultProfile::None;
    if (name == "light") return FaultProfile::Light;
    if (name == "heavy") return FaultProfile::Heavy;
    throw std::invalid_argument("unknown fault profile: " + name);
}

std::vector<std::string> builtin_scenario_names() {
    return {"residency_order", "cykas_starvation", "multicast_counterexample",
            "improvement1",    "improvement2",     "improvement3",
            "mf_load"};
}

Scenario builtin_scenario(const std::string& name) {
    if (name == "residency_order") return residency_order();
    if (name == "cykas_starvation") return cykas_starvation();
    if (name == "multicast_counterexample") return multicast_counterexample();
    if (name == "improvement1") return improvement1();
    if (name == "improvement2") return improvement2();
    if (name == "improvement3") return improvement3();
    if (name == "mf_load") return mf_load();
    throw std::invalid_argument("unknown scenario: " + name);
}

Scenario random_scenario(std::uint64_t seed, std::uint32_t n,
                         std::uint32_t messages, FaultProfile profile) {
    Scenario s = random_base(seed, n, messages, profile, false);
    s.name = "random";
    return s;
}

Scenario random_mcast_scenario(std::uint64_t seed, std::uint32_t n,
                               std::uint32_t messages, FaultProfile profile) {
    Scenario s = random_base(seed, n, messages, profile, true);
    s.name = "random_mcast";
    s.engine = EngineKind::Multicast;
    return s;
}

}  // namespace causal
