#pragma once

#include <cstdint>
#include <vector>

#include "causal/wire.hpp"

namespace causal {

/// One message handed up to the application layer.
struct Delivery {
    ProcessId from;
    MsgId mid = 0;
    Payload payload;
};

struct HandlerResult {
    std::vector<Delivery> delivered;
    std::vector<WireMessage> out;
};

/// Per-process causal-delivery state machine. Exactly one of
/// {causal_send, on_wire, on_timer} runs at a time per instance;
/// instances are transferable between threads, never shared.
class Engine {
public:
    virtual ~Engine() = default;

    /// Non-blocking causal send; returns any wire messages released.
    /// Unicast engines require exactly one destination.
    virtual std::vector<WireMessage> causal_send(
        const std::vector<ProcessId>& dsts, Payload payload) = 0;

    virtual HandlerResult on_wire(const WireMessage& w) = 0;

    /// Retransmission hook, invoked every timer period.
    virtual std::vector<WireMessage> on_timer() = 0;

    /// True when all protocol buffers are drained.
    virtual bool quiescent() const = 0;

    /// Instrumented elementary-step count (handler iterations plus
    /// data-structure steps).
    virtual std::uint64_t steps() const = 0;

    /// Wire messages dropped as protocol anomalies (impossible under the
    /// stated fault model; indicates corruption).
    virtual std::uint64_t anomalies() const { return 0; }

    virtual ProcessId self() const = 0;
};

}  // namespace causal
