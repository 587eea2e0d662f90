#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>

#include "causal/engine.hpp"
#include "causal/sliding.hpp"
#include "causal/wire.hpp"

namespace causal {

/// Stop-and-wait sender-buffering baseline: one message in transit per
/// sender, the next dequeued only when the previous one is acked.
class MfProcess final : public Engine {
public:
    explicit MfProcess(ProcessId self) : self_(self) {}

    std::vector<WireMessage> causal_send(const std::vector<ProcessId>& dsts,
                                         Payload payload) override;
    HandlerResult on_wire(const WireMessage& w) override;
    std::vector<WireMessage> on_timer() override;
    bool quiescent() const override;
    std::uint64_t steps() const override { return steps_; }
    std::uint64_t anomalies() const override { return anomalies_; }
    ProcessId self() const override { return self_; }

    bool in_flight() const { return flight_.has_value(); }
    std::size_t send_buffer_size() const { return sb_.size(); }

private:
    struct Msg {
        ProcessId rcv;
        MsgId mid = 0;
        Payload pl;
    };

    void try_send(std::vector<WireMessage>& out);

    ProcessId self_;
    MsgId ck_ = 1;
    std::deque<Msg> sb_;
    std::optional<Msg> flight_;
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> ld_;
    std::uint64_t steps_ = 0;
    std::uint64_t anomalies_ = 0;
};

/// Mode-counting sender-buffering baseline. Network-sends stall while the
/// process is in secret mode (positive mode counter); an eager send (one
/// performed with earlier sends unacked) raises the receiver's counter, a
/// you-can-tell control message lowers it once the sends preceding the
/// eager one are all acked. Assumes a fault-free network.
class CykasProcess final : public Engine {
public:
    explicit CykasProcess(ProcessId self) : self_(self) {}

    std::vector<WireMessage> causal_send(const std::vector<ProcessId>& dsts,
                                         Payload payload) override;
    HandlerResult on_wire(const WireMessage& w) override;
    std::vector<WireMessage> on_timer() override;
    bool quiescent() const override;
    std::uint64_t steps() const override;
    std::uint64_t anomalies() const override { return anomalies_; }
    ProcessId self() const override { return self_; }

    std::uint64_t mode() const { return mode_; }
    std::size_t send_buffer_size() const { return sb_.size(); }
    std::uint64_t unacked_sent() const { return unacked_count_; }

private:
    struct Msg {
        ProcessId rcv;
        MsgId mid = 0;
        Payload pl;
    };

    struct Sent {
        ProcessId rcv;
        MsgId mid = 0;
        bool eager = false;
        bool acked = false;
        bool ycted = false;
    };

    static std::uint64_t slot(MsgId mid) { return mid - 1; }

    void try_send(std::vector<WireMessage>& out);
    void on_msg(ProcessId from, const WireMessage& w, HandlerResult& result);
    void on_ack(ProcessId from, MsgId n, std::vector<WireMessage>& out);

    ProcessId self_;
    MsgId ck_ = 1;
    std::deque<Msg> sb_;
    SlidingArray<Sent> sa_;  // network-sent messages, slot = mid - 1
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> in_transit_;
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> ld_;
    std::uint64_t mode_ = 0;
    std::uint64_t unacked_count_ = 0;
    std::uint64_t steps_ = 0;
    std::uint64_t anomalies_ = 0;
};

}  // namespace causal
