#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace causal {

/// Opaque globally-unique process identifier. No global process set is
/// assumed; engines discover peers from traffic.
struct ProcessId {
    std::uint64_t value = 0;
    auto operator<=>(const ProcessId&) const = default;
};

struct ProcessIdHash {
    std::size_t operator()(const ProcessId& p) const {
        return std::hash<std::uint64_t>{}(p.value);
    }
};

/// Per-sender message id. Ids start at 1; 0 is the sentinel for
/// "no predecessor / nothing delivered yet".
using MsgId = std::uint64_t;

using Payload = std::string;
using Tick = std::uint64_t;

enum class WireKind : std::uint8_t { Msg, Ack, Permit, Yct };

/// One transport-layer message. MSG metadata is exactly
/// {mid, pid, flags}: constant size, independent of process count and
/// buffer occupancy. The eager flag is used by the Cykas baseline only
/// and shares the flag byte.
struct WireMessage {
    WireKind kind = WireKind::Msg;
    ProcessId src;
    ProcessId dst;
    MsgId mid = 0;
    MsgId pid = 0;           // Msg only
    bool needs_permit = false;  // Msg only
    bool eager = false;         // Msg, Cykas only
    Payload payload;            // Msg only
};

inline WireMessage make_msg(ProcessId src, ProcessId dst, MsgId mid, MsgId pid,
                            bool needs_permit, Payload payload) {
    WireMessage w;
    w.kind = WireKind::Msg;
    w.src = src;
    w.dst = dst;
    w.mid = mid;
    w.pid = pid;
    w.needs_permit = needs_permit;
    w.payload = std::move(payload);
    return w;
}

inline WireMessage make_control(WireKind kind, ProcessId src, ProcessId dst,
                                MsgId mid) {
    WireMessage w;
    w.kind = kind;
    w.src = src;
    w.dst = dst;
    w.mid = mid;
    return w;
}

// Wire layout: kind(1) src(8) dst(8) mid(8) [pid(8) flags(1) len(4) payload].
std::vector<std::byte> encode(const WireMessage& w);
WireMessage decode(const std::vector<std::byte>& bytes);

/// Serialized size excluding the payload bytes. For MSG this is the
/// metadata the causal-delivery layer adds and must be one constant.
std::size_t metadata_size(const WireMessage& w);
std::size_t encoded_size(const WireMessage& w);

}  // namespace causal
