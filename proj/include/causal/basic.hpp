#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <variant>

#include "causal/engine.hpp"
#include "causal/sliding.hpp"
#include "causal/wire.hpp"

namespace causal {

/// Identifies one delivered message awaiting its permit.
struct Per {
    ProcessId snd;
    MsgId mid = 0;
    bool operator==(const Per&) const = default;
};

struct PerHash {
    std::size_t operator()(const Per& p) const {
        return ProcessIdHash{}(p.snd) * 1000003u ^ std::hash<MsgId>{}(p.mid);
    }
};

/// The per field of a buffered message: the permit-map index it waits
/// on while in the send-buffer, then the needs-permit flag once
/// network-sent.
using PerField = std::variant<std::uint64_t, bool>;

inline std::uint64_t permit_index(const PerField& f) {
    return std::get<std::uint64_t>(f);
}
inline bool needs_permit(const PerField& f) { return std::get<bool>(f); }

/// Basic unicast causal-delivery engine: CSPS + FIFO with a FIFO send
/// buffer, an unacked sliding array and a missing-permits sliding map.
class BasicProcess final : public Engine {
public:
    struct Msg {
        ProcessId rcv;
        MsgId mid = 0;
        MsgId pid = 0;
        PerField per;
        std::optional<Payload> pl;  // absent = acked
    };

    struct Rcv {
        MsgId mid = 0;
        Payload pl;
        bool per = false;
    };

    explicit BasicProcess(ProcessId self) : self_(self) {}

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
    void on_msg(ProcessId from, const WireMessage& w, HandlerResult& result);
    void on_ack(ProcessId from, MsgId n, std::vector<WireMessage>& out);
    void on_permit(ProcessId from, MsgId n, std::vector<WireMessage>& out);

    ProcessId self_;
    MsgId ck_ = 1;
    SlidingArray<Msg> u_;           // unacked, slot = mid - 1
    SlidingMap<Per, PerHash> p_;    // missing permits
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> ls_;
    std::unordered_map<ProcessId, MsgId, ProcessIdHash> ld_;
    std::deque<Msg> sb_;
    std::unordered_map<ProcessId, std::unordered_map<MsgId, Rcv>, ProcessIdHash>
        rb_;  // sender -> pid -> record
    std::uint64_t steps_ = 0;
    std::uint64_t anomalies_ = 0;
};

}  // namespace causal
