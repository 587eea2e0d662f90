#include "causal/netsim.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "causal/baselines.hpp"
#include "causal/basic.hpp"
#include "causal/multicast.hpp"
#include "causal/sps_optimal.hpp"

namespace causal {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t link_seed(std::uint64_t seed, ProcessId src, ProcessId dst) {
    std::uint64_t s = seed;
    s = splitmix64(s) ^ src.value;
    s = splitmix64(s) ^ dst.value;
    return splitmix64(s);
}

double unit_draw(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

Tick range_draw(std::uint64_t& state, Tick lo, Tick hi) {
    if (hi <= lo) {
        return lo;
    }
    return lo + splitmix64(state) % (hi - lo + 1);
}

std::unique_ptr<Engine> make_engine(EngineKind kind, ProcessId p) {
    switch (kind) {
        case EngineKind::Basic:
            return std::make_unique<BasicProcess>(p);
        case EngineKind::SpsOptimal:
            return std::make_unique<OptProcess>(p);
        case EngineKind::Multicast:
            return std::make_unique<McastProcess>(p);
        case EngineKind::Mf:
            return std::make_unique<MfProcess>(p);
        case EngineKind::Cykas:
            return std::make_unique<CykasProcess>(p);
    }
    throw std::logic_error("unknown engine kind");
}

}  // namespace

EngineKind engine_kind_from_name(const std::string& name) {
    if (name == "basic") return EngineKind::Basic;
    if (name == "sps_optimal") return EngineKind::SpsOptimal;
    if (name == "multicast") return EngineKind::Multicast;
    if (name == "mf") return EngineKind::Mf;
    if (name == "cykas") return EngineKind::Cykas;
    throw std::invalid_argument("unknown engine: " + name);
}

std::string engine_kind_name(EngineKind kind) {
    switch (kind) {
        case EngineKind::Basic: return "basic";
        case EngineKind::SpsOptimal: return "sps_optimal";
        case EngineKind::Multicast: return "multicast";
        case EngineKind::Mf: return "mf";
        case EngineKind::Cykas: return "cykas";
    }
    throw std::logic_error("unknown engine kind");
}

const char* trace_event_name(TraceEvent e) {
    switch (e) {
        case TraceEvent::C: return "c";
        case TraceEvent::S: return "s";
        case TraceEvent::R: return "r";
        case TraceEvent::D: return "d";
        case TraceEvent::Ack: return "ack";
        case TraceEvent::Permit: return "permit";
        case TraceEvent::Yct: return "yct";
    }
    throw std::logic_error("unknown trace event");
}

TraceEvent trace_event_from_name(const std::string& name) {
    if (name == "c") return TraceEvent::C;
    if (name == "s") return TraceEvent::S;
    if (name == "r") return TraceEvent::R;
    if (name == "d") return TraceEvent::D;
    if (name == "ack") return TraceEvent::Ack;
    if (name == "permit") return TraceEvent::Permit;
    if (name == "yct") return TraceEvent::Yct;
    throw std::invalid_argument("unknown trace event: " + name);
}

std::string TraceLog::serialize() const {
    std::ostringstream out;
    for (const TraceRecord& r : records) {
        out << r.tick << '\t' << r.process.value << '\t'
            << trace_event_name(r.event) << '\t' << r.mid << '\t'
            << r.peer.value << '\n';
    }
    return out.str();
}

TraceLog TraceLog::parse(const std::string& text) {
    TraceLog log;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        TraceRecord r;
        std::string event;
        if (!(fields >> r.tick >> r.process.value >> event >> r.mid >>
              r.peer.value)) {
            throw std::invalid_argument("malformed trace line: " + line);
        }
        r.event = trace_event_from_name(event);
        log.records.push_back(r);
    }
    return log;
}

Simulator::Simulator(NetConfig config, std::vector<ProcessId> processes,
                     EngineKind kind)
    : config_(std::move(config)), processes_(std::move(processes)),
      kind_(kind) {
    std::sort(processes_.begin(), processes_.end());
    for (ProcessId p : processes_) {
        engines_.emplace(p, make_engine(kind_, p));
    }
}

const Engine& Simulator::engine(ProcessId p) const {
    return *engines_.at(p);
}

Simulator::LinkState& Simulator::link(ProcessId src, ProcessId dst) {
    auto key = std::make_pair(src.value, dst.value);
    auto it = links_.find(key);
    if (it == links_.end()) {
        it = links_.emplace(key, LinkState{link_seed(config_.seed, src, dst), 0})
                 .first;
    }
    return it->second;
}

MsgId Simulator::logical_mid(ProcessId owner, MsgId mid) const {
    auto it = alias_.find(std::make_pair(owner.value, mid));
    return it == alias_.end() ? mid : it->second;
}

void Simulator::record(Tick tick, ProcessId process, TraceEvent event,
                       MsgId mid, ProcessId peer) {
    trace_.records.push_back(TraceRecord{tick, process, event, mid, peer});
}

void Simulator::schedule_arrival(const WireMessage& w, Tick now) {
    LinkState& l = link(w.src, w.dst);
    if (unit_draw(l.rng) < config_.loss_prob &&
        l.loss_streak < config_.max_loss_streak) {
        l.loss_streak += 1;
        stats_.losses += 1;
        return;
    }
    l.loss_streak = 0;
    int copies = 1;
    if (unit_draw(l.rng) < config_.dup_prob) {
        copies = 2;
        stats_.duplicates += 1;
    }
    Tick lo = config_.latency_min;
    Tick hi = config_.latency_max;
    auto fixed = config_.link_latency.find(
        std::make_pair(w.src.value, w.dst.value));
    if (fixed != config_.link_latency.end()) {
        lo = fixed->second.first;
        hi = fixed->second.second;
    }
    for (int i = 0; i < copies; ++i) {
        Tick delay = range_draw(l.rng, lo, hi) +
                     range_draw(l.rng, 0, config_.reorder_jitter);
        PendingEvent ev;
        ev.time = now + delay;
        ev.seq = next_seq_++;
        ev.wire = w;
        queue_.push(std::move(ev));
        pending_ += 1;
    }
}

void Simulator::inject(const std::vector<WireMessage>& out, Tick now) {
    for (const WireMessage& w : out) {
        switch (w.kind) {
            case WireKind::Msg:
                stats_.msg_sends += 1;
                stats_.max_msg_metadata =
                    std::max<std::uint64_t>(stats_.max_msg_metadata,
                                            metadata_size(w));
                record(now, w.src, TraceEvent::S, logical_mid(w.src, w.mid),
                       w.dst);
                break;
            case WireKind::Ack: stats_.acks += 1; break;
            case WireKind::Permit: stats_.permits += 1; break;
            case WireKind::Yct: stats_.ycts += 1; break;
        }
        schedule_arrival(w, now);
    }
}

void Simulator::handle_causal_send(const Action& a, Tick now) {
    Engine& eng = *engines_.at(a.src);
    if (kind_ == EngineKind::Multicast || a.dsts.size() == 1) {
        MsgId mid = ++send_count_[a.src];
        for (ProcessId dst : a.dsts) {
            record(now, a.src, TraceEvent::C, mid, dst);
        }
        inject(eng.causal_send(a.dsts, a.payload), now);
        return;
    }
    // Unicast engine asked for a multi-destination action: split into
    // sequential unicasts presented in the trace as one logical message.
    MsgId logical = send_count_[a.src] + 1;
    for (ProcessId dst : a.dsts) {
        MsgId mid = ++send_count_[a.src];
        alias_[std::make_pair(a.src.value, mid)] = logical;
        record(now, a.src, TraceEvent::C, logical, dst);
        inject(eng.causal_send({dst}, a.payload), now);
    }
}

void Simulator::handle_arrival(const WireMessage& w, Tick now) {
    ProcessId dst = w.dst;
    switch (w.kind) {
        case WireKind::Msg:
            record(now, dst, TraceEvent::R, logical_mid(w.src, w.mid), w.src);
            break;
        case WireKind::Ack:
            record(now, dst, TraceEvent::Ack, logical_mid(dst, w.mid), w.src);
            break;
        case WireKind::Permit:
            record(now, dst, TraceEvent::Permit, logical_mid(w.src, w.mid),
                   w.src);
            break;
        case WireKind::Yct:
            record(now, dst, TraceEvent::Yct, logical_mid(w.src, w.mid),
                   w.src);
            break;
    }
    HandlerResult result = engines_.at(dst)->on_wire(w);
    for (const Delivery& d : result.delivered) {
        stats_.deliveries += 1;
        record(now, dst, TraceEvent::D, logical_mid(d.from, d.mid), d.from);
    }
    inject(result.out, now);
}

void Simulator::run_timers(Tick now) {
    for (ProcessId p : processes_) {
        inject(engines_.at(p)->on_timer(), now);
    }
}

bool Simulator::all_quiescent() const {
    for (const auto& [p, eng] : engines_) {
        if (!eng->quiescent()) {
            return false;
        }
    }
    return true;
}

RunResult Simulator::run(const std::vector<Action>& script, Tick tick_limit) {
    for (std::size_t i = 0; i < script.size(); ++i) {
        PendingEvent ev;
        ev.time = script[i].tick;
        ev.seq = next_seq_++;
        ev.action = static_cast<std::int64_t>(i);
        queue_.push(std::move(ev));
        pending_ += 1;
    }
    {
        PendingEvent timer;
        timer.time = config_.timer_period;
        timer.seq = next_seq_++;
        timer.is_timer = true;
        queue_.push(std::move(timer));
    }

    RunResult result;
    Tick now = 0;
    bool hit_limit = false;
    while (!queue_.empty()) {
        const PendingEvent& top = queue_.top();
        if (top.is_timer && pending_ == 0 && all_quiescent()) {
            break;  // only the idle timer left: the run is over
        }
        if (top.time > tick_limit) {
            hit_limit = true;
            break;
        }
        PendingEvent ev = top;
        queue_.pop();
        now = ev.time;
        if (ev.is_timer) {
            run_timers(now);
            PendingEvent next;
            next.time = now + config_.timer_period;
            next.seq = next_seq_++;
            next.is_timer = true;
            queue_.push(std::move(next));
        } else if (ev.action >= 0) {
            pending_ -= 1;
            handle_causal_send(script[static_cast<std::size_t>(ev.action)],
                               now);
        } else {
            pending_ -= 1;
            handle_arrival(ev.wire, now);
        }
    }

    for (const auto& [p, eng] : engines_) {
        stats_.steps += eng->steps();
        stats_.anomalies += eng->anomalies();
    }
    result.trace = std::move(trace_);
    result.stats = stats_;
    result.quiescent = !hit_limit && pending_ == 0 && all_quiescent();
    result.end_tick = now;
    return result;
}

}  // namespace causal
