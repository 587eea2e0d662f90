#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>

#include "causal/basic.hpp"
#include "causal/engine.hpp"
#include "causal/sliding.hpp"
#include "causal/wire.hpp"

namespace causal {

/// SPS-optimal unicast engine: unified sent/unsent buffer backed by one
/// sliding array, an indexable permit map, and the m1/m2/p2/u2 index
/// variables that keep every handler amortized constant time.
///
/// Index meanings (assertable after every handler):
///   m1 - first buffered message not yet network-sent
///   p2 - first live permit from a different sender than the first permit
///   m2 - first message whose permit index exceeds p2
///   u2 - first unacked message to a different receiver than the oldest
///        buffered message
class OptProcess final : public Engine {
public:
    struct Msg {
        ProcessId rcv;
        MsgId mid = 0;
        MsgId pid = 0;
        std::uint64_t per_index = 0;  // permit-map bound fixed at causal-send
        bool needs_permit = false;    // meaningful once sent
        bool sent = false;
        std::optional<Payload> pl;
    };

    explicit OptProcess(ProcessId self) : self_(self) {}

    std::vector<WireMessage> causal_send(const std::vector<ProcessId>& dsts,
                                         Payload payload) override;
    HandlerResult on_wire(const WireMessage& w) override;
    std::vector<WireMessage> on_timer() override;
    bool quiescent() const override;
    std::uint64_t steps() const override;
    std::uint64_t anomalies() const override { return anomalies_; }
    ProcessId self() const override { return self_; }

    // Introspection for tests.
    const SlidingArray<Msg>& buffer() const { return u_; }
    const IdxSlidingMap<Per, PerHash>& missing_permits() const { return p_; }
    std::uint64_t m1() const { return m1_; }
    std::uint64_t m2() const { return m2_; }
    std::uint64_t p2() const { return p2_; }
    std::uint64_t u2() const { return u2_; }
    void check_index_invariants() const;  // throws on violation

private:
    static std::uint64_t slot(MsgId mid) { return mid - 1; }

    void send_interval(std::uint64_t k, std::uint64_t p,
                       std::vector<WireMessage>& out);
    void update_p2_m2();
    void on_msg(ProcessId from, const WireMessage& w, HandlerResult& result);
    void on_ack(ProcessId from, MsgId n, std::vector<WireMessage>& out);
    void on_permit(ProcessId from, MsgId n, std::vector<WireMessage>& out);

    ProcessId self_;
    MsgId ck_ = 1;
    SlidingArray<Msg> u_;              // unified buffer, slot = mid - 1
    IdxSlidingMap<Per, PerHash> p_;    // missing permits
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> ls_;
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> ld_;
    std::unordered_map<ProcessId, std::unordered_map<MsgId, BasicProcess::Rcv>,
                       ProcessIdHash>
        rb_;
    std::uint64_t p2_ = 0;
    std::uint64_t m1_ = 0;
    std::uint64_t m2_ = 0;
    std::uint64_t u2_ = 0;
    std::uint64_t steps_ = 0;
    std::uint64_t anomalies_ = 0;
};

}  // namespace causal
