#include "causal/multicast.hpp"

#include <cassert>
#include <stdexcept>

namespace causal {

std::vector<WireMessage> McastProcess::causal_send(
    const std::vector<ProcessId>& dsts, Payload payload) {
    if (dsts.empty()) {
        throw std::invalid_argument("multicast requires a destination");
    }
    steps_ += 1;
    Msg m;
    m.rcv.insert(dsts.begin(), dsts.end());
    if (m.rcv.count(self_) > 0) {
        throw std::invalid_argument("self-send rejected");
    }
    m.unack = m.rcv;
    m.mid = ck_;
    for (ProcessId j : m.rcv) {
        m.pids[j] = ls_[j];
        ls_[j] = ck_;
    }
    m.per = PerField{std::in_place_index<0>, p_.next()};
    m.pl = std::move(payload);
    ck_ += 1;
    sb_.push_back(std::move(m));
    std::vector<WireMessage> out;
    try_send(out);
    return out;
}

void McastProcess::try_send(std::vector<WireMessage>& out) {
    while (!sb_.empty()) {
        steps_ += 1;
        Msg& head = sb_.front();
        if (p_.first() < permit_index(head.per)) {
            return;
        }
        Msg m = std::move(head);
        sb_.pop_front();
        // A multi-receiver message counts as requiring delivery knowledge
        // even with nothing unacked before it.
        m.per = PerField{std::in_place_index<1>,
                         u_.size() > 0 || m.rcv.size() > 1};
        assert(u_.next() == slot(m.mid));
        emit_copies(m, out);
        u_.add(std::move(m));
    }
}

void McastProcess::emit_copies(const Msg& m, std::vector<WireMessage>& out) {
    for (ProcessId j : m.rcv) {
        steps_ += 1;
        out.push_back(make_msg(self_, j, m.mid, m.pids.at(j),
                               needs_permit(m.per), *m.pl));
    }
}

HandlerResult McastProcess::on_wire(const WireMessage& w) {
    HandlerResult result;
    switch (w.kind) {
        case WireKind::Msg:
            on_msg(w.src, w, result);
            break;
        case WireKind::Ack:
            on_ack(w.src, w.mid, result.out);
            break;
        case WireKind::Permit:
            on_permit(w.src, w.mid, result.out);
            break;
        default:
            anomalies_ += 1;
            break;
    }
    return result;
}

void McastProcess::on_msg(ProcessId from, const WireMessage& w,
                          HandlerResult& result) {
    steps_ += 1;
    if (w.mid <= ld_[from]) {
        result.out.push_back(make_control(WireKind::Ack, self_, from, w.mid));
        return;
    }
    auto& chain = rb_[from];
    auto [it, inserted] = chain.emplace(
        w.pid, BasicProcess::Rcv{w.mid, w.payload, w.needs_permit});
    if (!inserted && it->second.mid != w.mid) {
        assert(false && "corrupt predecessor chain");
        anomalies_ += 1;
        return;
    }
    while (true) {
        steps_ += 1;
        auto next = chain.find(ld_[from]);
        if (next == chain.end()) {
            break;
        }
        BasicProcess::Rcv b = std::move(next->second);
        chain.erase(next);
        ld_[from] = b.mid;
        if (b.per) {
            p_.add(Per{from, b.mid});
        }
        result.out.push_back(make_control(WireKind::Ack, self_, from, b.mid));
        result.delivered.push_back(Delivery{from, b.mid, std::move(b.pl)});
    }
}

void McastProcess::on_ack(ProcessId from, MsgId n,
                          std::vector<WireMessage>& out) {
    steps_ += 1;
    if (slot(n) < u_.first()) {
        out.push_back(make_control(WireKind::Permit, self_, from, n));
        return;
    }
    if (slot(n) >= u_.next()) {
        anomalies_ += 1;
        return;
    }
    Msg& acked = u_.at(slot(n));
    acked.unack.erase(from);
    if (acked.unack.empty()) {
        acked.pl.reset();
    }
    if (slot(n) == u_.first()) {
        while (u_.size() > 0) {
            steps_ += 1;
            Msg& m = u_.peek();
            // The message's own acks gate its permits: wait until fully
            // acked before releasing the receivers.
            if (m.pl.has_value()) {
                return;
            }
            if (needs_permit(m.per)) {
                for (ProcessId j : m.rcv) {
                    out.push_back(
                        make_control(WireKind::Permit, self_, j, m.mid));
                }
            }
            u_.remove();
        }
    }
}

void McastProcess::on_permit(ProcessId from, MsgId n,
                             std::vector<WireMessage>& out) {
    steps_ += 1;
    p_.remove(Per{from, n});
    try_send(out);
}

std::vector<WireMessage> McastProcess::on_timer() {
    std::vector<WireMessage> out;
    for (std::uint64_t k = u_.first(); k < u_.next(); ++k) {
        steps_ += 1;
        const Msg& m = u_.at(k);
        for (ProcessId j : m.unack) {
            steps_ += 1;
            out.push_back(make_msg(self_, j, m.mid, m.pids.at(j),
                                   needs_permit(m.per), *m.pl));
        }
    }
    p_.for_each_live([&](std::uint64_t, const Per& per) {
        steps_ += 1;
        out.push_back(make_control(WireKind::Ack, self_, per.snd, per.mid));
    });
    return out;
}

bool McastProcess::quiescent() const {
    if (!sb_.empty() || !u_.empty() || !p_.empty()) {
        return false;
    }
    for (const auto& [sender, chain] : rb_) {
        if (!chain.empty()) {
            return false;
        }
    }
    return true;
}

std::uint64_t McastProcess::steps() const {
    return steps_ + u_.steps() + p_.steps();
}

MsgId McastProcess::last_delivered(ProcessId from) const {
    auto it = ld_.find(from);
    return it == ld_.end() ? 0 : it->second;
}

}  // namespace causal
