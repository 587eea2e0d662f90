#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>

#include "causal/basic.hpp"
#include "causal/engine.hpp"
#include "causal/sliding.hpp"
#include "causal/wire.hpp"

namespace causal {

/// Multicast variant of the basic engine. A message carries a receiver
/// set; each receiver gets its own copy on the wire with its own
/// predecessor id. A multi-receiver message always needs permits, and
/// its permits wait for the acks of the message itself.
class McastProcess final : public Engine {
public:
    struct Msg {
        std::set<ProcessId> rcv;
        std::set<ProcessId> unack;
        MsgId mid = 0;
        std::map<ProcessId, MsgId> pids;  // per-receiver predecessor
        PerField per;
        std::optional<Payload> pl;
    };

    explicit McastProcess(ProcessId self) : self_(self) {}

    std::vector<WireMessage> causal_send(const std::vector<ProcessId>& dsts,
                                         Payload payload) override;
    HandlerResult on_wire(const WireMessage& w) override;
    std::vector<WireMessage> on_timer() override;
    bool quiescent() const override;
    std::uint64_t steps() const override;
    std::uint64_t anomalies() const override { return anomalies_; }
    ProcessId self() const override { return self_; }

    // Introspection for tests.
    const SlidingArray<Msg>& unacked() const { return u_; }
    const SlidingMap<Per, PerHash>& missing_permits() const { return p_; }
    std::size_t send_buffer_size() const { return sb_.size(); }
    MsgId last_delivered(ProcessId from) const;
    MsgId clock() const { return ck_; }

private:
    static std::uint64_t slot(MsgId mid) { return mid - 1; }

    void try_send(std::vector<WireMessage>& out);
    void emit_copies(const Msg& m, std::vector<WireMessage>& out);
    void on_msg(ProcessId from, const WireMessage& w, HandlerResult& result);
    void on_ack(ProcessId from, MsgId n, std::vector<WireMessage>& out);
    void on_permit(ProcessId from, MsgId n, std::vector<WireMessage>& out);

    ProcessId self_;
    MsgId ck_ = 1;
    SlidingArray<Msg> u_;
    SlidingMap<Per, PerHash> p_;
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> ls_;
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> ld_;
    std::deque<Msg> sb_;
    std::unordered_map<ProcessId, std::unordered_map<MsgId, BasicProcess::Rcv>,
                       ProcessIdHash>
        rb_;
    std::uint64_t steps_ = 0;
    std::uint64_t anomalies_ = 0;
};

}  // namespace causal
