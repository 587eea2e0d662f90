#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "causal/netsim.hpp"
#include "causal/wire.hpp"

namespace causal {

/// Timing of one message at one destination, in ticks.
struct MessageMetric {
    MsgId mid = 0;
    ProcessId src;
    ProcessId dst;
    Tick c_tick = 0;
    std::optional<Tick> s_tick;  // first network-send
    std::optional<Tick> d_tick;
    std::optional<Tick> residency() const {
        return s_tick ? std::optional<Tick>(*s_tick - c_tick) : std::nullopt;
    }
    std::optional<Tick> latency() const {
        return d_tick ? std::optional<Tick>(*d_tick - c_tick) : std::nullopt;
    }
};

struct RunMetrics {
    std::vector<MessageMetric> per_message;
    std::uint64_t max_in_transit_per_sender = 0;  // sent, not yet acked
    std::uint64_t max_send_buffer = 0;     // causal-sent, not yet sent
    std::uint64_t max_receive_buffer = 0;  // received, not yet delivered
    RunStats stats;
    bool quiescent = false;  // partial metrics when false
};

RunMetrics analyze(const TraceLog& trace, const RunStats& stats,
                   bool quiescent);

/// One CSV row per (message, destination) plus a trailing aggregate row.
std::string to_csv(const RunMetrics& metrics, const std::string& run_id);

}  // namespace causal
