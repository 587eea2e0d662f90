#include "causal/metrics.hpp"

#include <algorithm>
#include <sstream>

namespace causal {
namespace {

struct Key {
    std::uint64_t src = 0;
    MsgId mid = 0;
    std::uint64_t dst = 0;
    auto operator<=>(const Key&) const = default;
};

}  // namespace

RunMetrics analyze(const TraceLog& trace, const RunStats& stats,
                   bool quiescent) {
    RunMetrics m;
    m.stats = stats;
    m.quiescent = quiescent;

    std::map<Key, std::size_t> index;  // -> slot in per_message
    std::map<std::pair<std::uint64_t, MsgId>, bool> sent_once;
    std::map<std::uint64_t, std::uint64_t> in_transit;   // per sender
    std::map<std::uint64_t, std::uint64_t> send_buf;     // per sender
    std::map<std::uint64_t, std::uint64_t> recv_buf;     // per receiver
    std::map<Key, bool> acked_once;
    std::map<Key, bool> received_undelivered;

    for (const TraceRecord& r : trace.records) {
        switch (r.event) {
            case TraceEvent::C: {
                Key k{r.process.value, r.mid, r.peer.value};
                index.emplace(k, m.per_message.size());
                if (index.at(k) == m.per_message.size()) {
                    MessageMetric mm;
                    mm.mid = r.mid;
                    mm.src = r.process;
                    mm.dst = r.peer;
                    mm.c_tick = r.tick;
                    m.per_message.push_back(mm);
                }
                auto buffered = std::make_pair(r.process.value, r.mid);
                if (sent_once.emplace(buffered, false).second) {
                    std::uint64_t& b = send_buf[r.process.value];
                    b += 1;
                    m.max_send_buffer = std::max(m.max_send_buffer, b);
                }
                break;
            }
            case TraceEvent::S: {
                auto it = index.find(Key{r.process.value, r.mid, r.peer.value});
                if (it != index.end() &&
                    !m.per_message[it->second].s_tick.has_value()) {
                    m.per_message[it->second].s_tick = r.tick;
                    std::uint64_t& t = in_transit[r.process.value];
                    t += 1;
                    m.max_in_transit_per_sender =
                        std::max(m.max_in_transit_per_sender, t);
                }
                auto buffered = std::make_pair(r.process.value, r.mid);
                auto flag = sent_once.find(buffered);
                if (flag != sent_once.end() && !flag->second) {
                    flag->second = true;
                    send_buf[r.process.value] -= 1;
                }
                break;
            }
            case TraceEvent::R: {
                Key k{r.peer.value, r.mid, r.process.value};
                if (index.count(k) > 0 &&
                    received_undelivered.emplace(k, true).second) {
                    std::uint64_t& b = recv_buf[r.process.value];
                    b += 1;
                    m.max_receive_buffer = std::max(m.max_receive_buffer, b);
                }
                break;
            }
            case TraceEvent::D: {
                Key k{r.peer.value, r.mid, r.process.value};
                auto it = index.find(k);
                if (it != index.end() &&
                    !m.per_message[it->second].d_tick.has_value()) {
                    m.per_message[it->second].d_tick = r.tick;
                }
                auto rb = received_undelivered.find(k);
                if (rb != received_undelivered.end() && rb->second) {
                    rb->second = false;
                    recv_buf[r.process.value] -= 1;
                }
                break;
            }
            case TraceEvent::Ack: {
                Key k{r.process.value, r.mid, r.peer.value};
                if (index.count(k) > 0 && acked_once.emplace(k, true).second) {
                    in_transit[r.process.value] -= 1;
                }
                break;
            }
            default:
                break;
        }
    }
    return m;
}

std::string to_csv(const RunMetrics& metrics, const std::string& run_id) {
    std::ostringstream out;
    out << "run_id,mid,src,dst,c_tick,s_tick,d_tick,residency,latency\n";
    for (const MessageMetric& mm : metrics.per_message) {
        out << run_id << ',' << mm.mid << ',' << mm.src.value << ','
            << mm.dst.value << ',' << mm.c_tick << ',';
        if (mm.s_tick) out << *mm.s_tick;
        out << ',';
        if (mm.d_tick) out << *mm.d_tick;
        out << ',';
        if (auto r = mm.residency()) out << *r;
        out << ',';
        if (auto l = mm.latency()) out << *l;
        out << '\n';
    }
    const RunStats& s = metrics.stats;
    out << run_id << ",aggregate,msg_sends=" << s.msg_sends
        << ",acks=" << s.acks << ",permits=" << s.permits
        << ",ycts=" << s.ycts << ",deliveries=" << s.deliveries
        << ",max_msg_metadata=" << s.max_msg_metadata << ",steps=" << s.steps
        << ",max_in_transit=" << metrics.max_in_transit_per_sender
        << ",max_send_buffer=" << metrics.max_send_buffer
        << ",max_receive_buffer=" << metrics.max_receive_buffer
        << ",quiescent=" << (metrics.quiescent ? 1 : 0) << '\n';
    return out.str();
}

}  // namespace causal
