#include "causal/wire.hpp"

#include <cstring>
#include <stdexcept>

namespace causal {

namespace {

void put_u64(std::vector<std::byte>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
    }
}

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
    }
}

std::uint64_t get_u64(const std::vector<std::byte>& in, std::size_t& pos) {
    if (pos + 8 > in.size()) {
        throw std::invalid_argument("truncated wire message");
    }
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
    }
    pos += 8;
    return v;
}

std::uint32_t get_u32(const std::vector<std::byte>& in, std::size_t& pos) {
    if (pos + 4 > in.size()) {
        throw std::invalid_argument("truncated wire message");
    }
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(in[pos + i]) << (8 * i);
    }
    pos += 4;
    return v;
}

}  // namespace

std::vector<std::byte> encode(const WireMessage& w) {
    std::vector<std::byte> out;
    out.reserve(encoded_size(w));
    out.push_back(static_cast<std::byte>(w.kind));
    put_u64(out, w.src.value);
    put_u64(out, w.dst.value);
    put_u64(out, w.mid);
    if (w.kind == WireKind::Msg) {
        put_u64(out, w.pid);
        std::uint8_t flags = (w.needs_permit ? 1 : 0) | (w.eager ? 2 : 0);
        out.push_back(static_cast<std::byte>(flags));
        put_u32(out, static_cast<std::uint32_t>(w.payload.size()));
        for (char c : w.payload) {
            out.push_back(static_cast<std::byte>(c));
        }
    }
    return out;
}

WireMessage decode(const std::vector<std::byte>& bytes) {
    std::size_t pos = 0;
    if (bytes.empty()) {
        throw std::invalid_argument("empty wire message");
    }
    WireMessage w;
    w.kind = static_cast<WireKind>(bytes[pos++]);
    w.src.value = get_u64(bytes, pos);
    w.dst.value = get_u64(bytes, pos);
    w.mid = get_u64(bytes, pos);
    if (w.kind == WireKind::Msg) {
        w.pid = get_u64(bytes, pos);
        if (pos >= bytes.size()) {
            throw std::invalid_argument("truncated wire message");
        }
        auto flags = static_cast<std::uint8_t>(bytes[pos++]);
        w.needs_permit = flags & 1;
        w.eager = flags & 2;
        std::uint32_t len = get_u32(bytes, pos);
        if (pos + len > bytes.size()) {
            throw std::invalid_argument("truncated payload");
        }
        w.payload.assign(reinterpret_cast<const char*>(bytes.data()) + pos, len);
        pos += len;
    }
    if (pos != bytes.size()) {
        throw std::invalid_argument("trailing bytes in wire message");
    }
    return w;
}

std::size_t metadata_size(const WireMessage& w) {
    // kind + src + dst + mid, plus pid + flags + length for MSG.
    return w.kind == WireKind::Msg ? 1 + 8 + 8 + 8 + 8 + 1 + 4 : 1 + 8 + 8 + 8;
}

std::size_t encoded_size(const WireMessage& w) {
    return metadata_size(w) +
           (w.kind == WireKind::Msg ? w.payload.size() : 0);
}

}  // namespace causal
