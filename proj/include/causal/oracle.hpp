#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "causal/netsim.hpp"
#include "causal/wire.hpp"

namespace causal {

/// Message identity in a trace: the process that assigned the mid plus
/// the mid itself.
struct MsgKey {
    ProcessId sender;
    MsgId mid = 0;
    auto operator<=>(const MsgKey&) const = default;
};

/// Vector timestamp over the application-visible events (causal-send
/// and deliver); network-send and receive never touch it.
using HbClock = std::map<std::uint64_t, std::uint64_t>;

/// Strict pointwise order: a < b componentwise with at least one strict.
bool hb_less(const HbClock& a, const HbClock& b);

/// Clock of each message at its causal-send. m1 happens-before m2 iff
/// hb_less(clock(m1), clock(m2)).
std::map<MsgKey, HbClock> stamp_trace(const TraceLog& trace);

struct Violation {
    enum class Kind { Causal, Fifo };
    ProcessId destination;
    MsgKey earlier;  // delivered first
    MsgKey later;    // delivered second; for Causal, later happens-before earlier
    Kind kind = Kind::Causal;
};

struct Undelivered {
    MsgKey key;
    ProcessId destination;
};

struct Verdict {
    bool ok = true;
    std::vector<Violation> violations;
    std::vector<Undelivered> undelivered;

    std::string serialize() const;
};

/// Full trace check: causal order and per-(sender,receiver) FIFO order
/// at every destination, plus causal-sent messages never delivered.
Verdict check(const TraceLog& trace);

/// Happens-before by explicit transitive closure over the event graph.
/// Exists to cross-check stamp_trace; refuses traces over 200 messages.
std::set<std::pair<MsgKey, MsgKey>> brute_force_hb(const TraceLog& trace);

/// The relation induced by stamp_trace, in the same shape as
/// brute_force_hb for direct comparison.
std::set<std::pair<MsgKey, MsgKey>> clock_hb(const TraceLog& trace);

}  // namespace causal
