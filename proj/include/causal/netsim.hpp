#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causal/engine.hpp"
#include "causal/wire.hpp"

namespace causal {

enum class EngineKind { Basic, SpsOptimal, Multicast, Mf, Cykas };

EngineKind engine_kind_from_name(const std::string& name);
std::string engine_kind_name(EngineKind kind);

/// Network fault model parameters. All draws come from per-link
/// deterministic generators derived from seed, so one link's traffic
/// never perturbs another's.
struct NetConfig {
    std::uint64_t seed = 1;
    Tick latency_min = 50;
    Tick latency_max = 150;   // default mean 100
    double loss_prob = 0.0;
    double dup_prob = 0.0;
    Tick reorder_jitter = 0;
    std::uint32_t max_loss_streak = 10;  // fairness: bounded consecutive drops
    Tick timer_period = 1000;            // 10x mean latency
    // Fixed (min, max) latency for specific directed links.
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::pair<Tick, Tick>>
        link_latency;
};

enum class TraceEvent : std::uint8_t { C, S, R, D, Ack, Permit, Yct };

const char* trace_event_name(TraceEvent e);
TraceEvent trace_event_from_name(const std::string& name);

/// One trace line. mid is always paired with the process that assigned
/// it: the record's process for c/s/ack, the peer for r/d/permit/yct.
struct TraceRecord {
    Tick tick = 0;
    ProcessId process;
    TraceEvent event = TraceEvent::C;
    MsgId mid = 0;
    ProcessId peer;
    bool operator==(const TraceRecord&) const = default;
};

struct TraceLog {
    std::vector<TraceRecord> records;

    std::string serialize() const;
    static TraceLog parse(const std::string& text);
};

/// One scripted application action: at `tick`, process `src`
/// causal-sends one message (a multicast if dsts has several entries)
/// with an opaque payload tag.
struct Action {
    Tick tick = 0;
    ProcessId src;
    std::vector<ProcessId> dsts;
    Payload payload;
};

struct RunStats {
    std::uint64_t msg_sends = 0;  // MSG emissions incl. retransmissions
    std::uint64_t acks = 0;
    std::uint64_t permits = 0;
    std::uint64_t ycts = 0;
    std::uint64_t deliveries = 0;
    std::uint64_t losses = 0;
    std::uint64_t duplicates = 0;
    std::uint64_t max_msg_metadata = 0;  // serialized MSG metadata bytes
    std::uint64_t steps = 0;             // summed engine step counters
    std::uint64_t anomalies = 0;

    std::uint64_t wire_events() const {
        return msg_sends + acks + permits + ycts;
    }
};

struct RunResult {
    TraceLog trace;
    RunStats stats;
    bool quiescent = false;
    Tick end_tick = 0;
};

/// Single-threaded discrete-event simulator. A run is a pure function
/// of (config, processes, engine kind, script): identical inputs give
/// byte-identical traces.
class Simulator {
public:
    Simulator(NetConfig config, std::vector<ProcessId> processes,
              EngineKind kind);

    RunResult run(const std::vector<Action>& script, Tick tick_limit);

    const Engine& engine(ProcessId p) const;

private:
    struct PendingEvent {
        Tick time = 0;
        std::uint64_t seq = 0;
        bool is_timer = false;
        std::int64_t action = -1;  // index into the script, or -1
        WireMessage wire;          // arrival events only

        bool operator>(const PendingEvent& o) const {
            return std::tie(time, seq) > std::tie(o.time, o.seq);
        }
    };

    struct LinkState {
        std::uint64_t rng = 0;
        std::uint32_t loss_streak = 0;
    };

    void schedule_arrival(const WireMessage& w, Tick now);
    void inject(const std::vector<WireMessage>& out, Tick now);
    void handle_causal_send(const Action& a, Tick now);
    void handle_arrival(const WireMessage& w, Tick now);
    void run_timers(Tick now);
    bool all_quiescent() const;
    LinkState& link(ProcessId src, ProcessId dst);
    MsgId logical_mid(ProcessId owner, MsgId mid) const;
    void record(Tick tick, ProcessId process, TraceEvent event, MsgId mid,
                ProcessId peer);

    NetConfig config_;
    std::vector<ProcessId> processes_;
    EngineKind kind_;
    std::unordered_map<ProcessId, std::unique_ptr<Engine>, ProcessIdHash>
        engines_;
    std::priority_queue<PendingEvent, std::vector<PendingEvent>,
                        std::greater<PendingEvent>>
        queue_;
    std::uint64_t next_seq_ = 0;
    std::uint64_t pending_ = 0;  // non-timer events in queue_
    std::map<std::pair<std::uint64_t, std::uint64_t>, LinkState> links_;
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> send_count_;
    // Split multicast actions on unicast engines: per-copy mid -> the
    // logical mid shared by all copies of the action.
    std::map<std::pair<std::uint64_t, MsgId>, MsgId> alias_;
    TraceLog trace_;
    RunStats stats_;
};

}  // namespace causal
