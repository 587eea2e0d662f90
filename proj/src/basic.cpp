#include "causal/basic.hpp"

#include <cassert>
#include <stdexcept>

namespace causal {

std::vector<WireMessage> BasicProcess::causal_send(
    const std::vector<ProcessId>& dsts, Payload payload) {
    if (dsts.size() != 1) {
        throw std::invalid_argument("unicast engine requires one destination");
    }
    ProcessId j = dsts.front();
    if (j == self_) {
        throw std::invalid_argument("self-send rejected");
    }
    steps_ += 1;
    Msg m;
    m.rcv = j;
    m.mid = ck_;
    m.pid = ls_[j];
    m.per = PerField{std::in_place_index<0>, p_.next()};
    m.pl = std::move(payload);
    ls_[j] = ck_;
    ck_ += 1;
    sb_.push_back(std::move(m));
    std::vector<WireMessage> out;
    try_send(out);
    return out;
}

void BasicProcess::try_send(std::vector<WireMessage>& out) {
    while (!sb_.empty()) {
        steps_ += 1;
        Msg& head = sb_.front();
        if (p_.first() < permit_index(head.per)) {
            return;
        }
        Msg m = std::move(head);
        sb_.pop_front();
        m.per = PerField{std::in_place_index<1>, u_.size() > 0};
        // Messages enter u in mid order; keeps slot = mid - 1.
        assert(u_.next() == slot(m.mid));
        bool flagged = needs_permit(m.per);
        out.push_back(make_msg(self_, m.rcv, m.mid, m.pid, flagged, *m.pl));
        u_.add(std::move(m));
    }
}

HandlerResult BasicProcess::on_wire(const WireMessage& w) {
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

void BasicProcess::on_msg(ProcessId from, const WireMessage& w,
                          HandlerResult& result) {
    steps_ += 1;
    if (w.mid <= ld_[from]) {
        // Duplicate of a delivered message: the earlier ack may have
        // been lost, so re-ack.
        result.out.push_back(make_control(WireKind::Ack, self_, from, w.mid));
        return;
    }
    auto& chain = rb_[from];
    auto [it, inserted] = chain.emplace(
        w.pid, Rcv{w.mid, w.payload, w.needs_permit});
    if (!inserted && it->second.mid != w.mid) {
        // Two distinct messages claiming the same predecessor: broken
        // FIFO chain, impossible under loss/dup/reorder.
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
        Rcv b = std::move(next->second);
        chain.erase(next);
        ld_[from] = b.mid;
        if (b.per) {
            p_.add(Per{from, b.mid});
        }
        result.out.push_back(make_control(WireKind::Ack, self_, from, b.mid));
        result.delivered.push_back(Delivery{from, b.mid, std::move(b.pl)});
    }
}

void BasicProcess::on_ack(ProcessId from, MsgId n,
                          std::vector<WireMessage>& out) {
    steps_ += 1;
    if (slot(n) < u_.first()) {
        // Already removed: the permit may have been lost; re-send it.
        out.push_back(make_control(WireKind::Permit, self_, from, n));
        return;
    }
    if (slot(n) >= u_.next()) {
        anomalies_ += 1;  // ack for a never-sent mid
        return;
    }
    u_.at(slot(n)).pl.reset();
    if (slot(n) == u_.first()) {
        u_.remove();
        while (u_.size() > 0) {
            steps_ += 1;
            Msg& m = u_.peek();
            if (needs_permit(m.per)) {
                out.push_back(
                    make_control(WireKind::Permit, self_, m.rcv, m.mid));
            }
            if (m.pl.has_value()) {
                return;
            }
            u_.remove();
        }
    }
}

void BasicProcess::on_permit(ProcessId from, MsgId n,
                             std::vector<WireMessage>& out) {
    steps_ += 1;
    p_.remove(Per{from, n});
    try_send(out);
}

std::vector<WireMessage> BasicProcess::on_timer() {
    std::vector<WireMessage> out;
    for (std::uint64_t k = u_.first(); k < u_.next(); ++k) {
        steps_ += 1;
        const Msg& m = u_.at(k);
        if (m.pl.has_value()) {
            out.push_back(make_msg(self_, m.rcv, m.mid, m.pid,
                                   needs_permit(m.per), *m.pl));
        }
    }
    // Re-ack every missing permit, as if the message had just been
    // delivered; the sender answers with the (possibly lost) permit.
    p_.for_each_live([&](std::uint64_t, const Per& per) {
        steps_ += 1;
        out.push_back(make_control(WireKind::Ack, self_, per.snd, per.mid));
    });
    return out;
}

bool BasicProcess::quiescent() const {
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

std::uint64_t BasicProcess::steps() const {
    return steps_ + u_.steps() + p_.steps();
}

MsgId BasicProcess::last_delivered(ProcessId from) const {
    auto it = ld_.find(from);
    return it == ld_.end() ? 0 : it->second;
}

}  // namespace causal
