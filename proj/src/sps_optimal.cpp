#include "causal/sps_optimal.hpp"

#include <cassert>
#include <stdexcept>

namespace causal {

std::vector<WireMessage> OptProcess::causal_send(
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
    m.per_index = p_.next();
    m.pl = std::move(payload);
    ls_[j] = ck_;
    ck_ += 1;
    assert(u_.next() == slot(m.mid));
    std::uint64_t appended = u_.add(std::move(m));
    // u2 stays exact across appends: a new message to the same receiver
    // as the oldest buffered one cannot be the first foreign unacked.
    if (u2_ == appended && u_.at(appended).rcv == u_.peek().rcv) {
        u2_ = u_.next();
    }
    // Likewise m2: with no permit from a second sender, the new message
    // does not depend on the permit at p2.
    if (m2_ == appended && u_.at(appended).per_index <= p2_) {
        m2_ = u_.next();
    }
    std::vector<WireMessage> out;
    send_interval(u_.next() - 1, p2_, out);
    return out;
}

void OptProcess::send_interval(std::uint64_t k, std::uint64_t p,
                               std::vector<WireMessage>& out) {
    std::uint64_t p1 = p_.first();
    std::optional<ProcessId> first_permit_sender;
    if (!p_.empty()) {
        first_permit_sender = p_.peek().snd;
    }
    std::optional<ProcessId> first_buffer_receiver;
    if (!u_.empty()) {
        first_buffer_receiver = u_.peek().rcv;
    }
    while (k < u_.next() && u_.at(k).per_index <= p) {
        steps_ += 1;
        Msg& m = u_.at(k);
        if (!m.sent &&
            (m.per_index <= p1 ||
             (first_permit_sender && m.rcv == *first_permit_sender))) {
            m.sent = true;
            m.needs_permit = u2_ < k || m.rcv != *first_buffer_receiver;
            out.push_back(
                make_msg(self_, m.rcv, m.mid, m.pid, m.needs_permit, *m.pl));
        }
        k += 1;
    }
    while (m1_ < u_.next() && u_.at(m1_).sent) {
        m1_ += 1;
        steps_ += 1;
    }
}

void OptProcess::update_p2_m2() {
    if (p_.empty()) {
        p2_ = p_.next();
    } else {
        ProcessId s = p_.peek().snd;
        while (p2_ < p_.next() &&
               (!p_.present(p2_) || p_.get(p2_).snd == s)) {
            p2_ += 1;
            steps_ += 1;
        }
    }
    while (m2_ < u_.next() && u_.at(m2_).per_index <= p2_) {
        m2_ += 1;
        steps_ += 1;
    }
}

HandlerResult OptProcess::on_wire(const WireMessage& w) {
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

void OptProcess::on_msg(ProcessId from, const WireMessage& w,
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
            std::uint64_t k = p_.next();
            p_.add(Per{from, b.mid});
            if (p2_ == k && from == p_.peek().snd) {
                p2_ = k + 1;
                while (m2_ < u_.next() && u_.at(m2_).per_index <= p2_) {
                    m2_ += 1;
                    steps_ += 1;
                }
            }
        }
        result.out.push_back(make_control(WireKind::Ack, self_, from, b.mid));
        result.delivered.push_back(Delivery{from, b.mid, std::move(b.pl)});
    }
}

void OptProcess::on_ack(ProcessId from, MsgId n,
                        std::vector<WireMessage>& out) {
    steps_ += 1;
    if (slot(n) < u_.first()) {
        out.push_back(make_control(WireKind::Permit, self_, from, n));
        return;
    }
    if (slot(n) >= u_.next() || !u_.at(slot(n)).sent) {
        anomalies_ += 1;  // ack for a never-network-sent mid
        return;
    }
    u_.at(slot(n)).pl.reset();
    std::uint64_t s = slot(n);
    if (s == u_.first()) {
        u_.remove();
        while (u_.size() > 0) {
            steps_ += 1;
            Msg& m = u_.peek();
            if (m.sent && m.needs_permit && m.rcv != from) {
                out.push_back(
                    make_control(WireKind::Permit, self_, m.rcv, m.mid));
            }
            if (m.pl.has_value()) {
                break;
            }
            u_.remove();
        }
        s = u_.first();
    }
    if (s == u2_ && u2_ < u_.next()) {
        ProcessId r = u_.peek().rcv;
        while (u2_ < u_.next()) {
            steps_ += 1;
            const Msg& m = u_.at(u2_);
            if (m.pl.has_value() && m.rcv != r) {
                break;
            }
            if (m.sent && m.needs_permit && m.rcv == r) {
                out.push_back(
                    make_control(WireKind::Permit, self_, m.rcv, m.mid));
            }
            u2_ += 1;
        }
    }
}

void OptProcess::on_permit(ProcessId from, MsgId n,
                           std::vector<WireMessage>& out) {
    steps_ += 1;
    Per per{from, n};
    auto idx = p_.index(per);
    if (!idx.has_value()) {
        return;
    }
    std::uint64_t k = *idx;
    std::uint64_t p1 = p_.first();
    p_.remove(per);
    if (k == p1) {
        k = p_.first();
        send_interval(m1_, k, out);
    }
    if (k == p2_) {
        std::uint64_t l = m2_;
        update_p2_m2();
        send_interval(l, p2_, out);
    }
}

std::vector<WireMessage> OptProcess::on_timer() {
    std::vector<WireMessage> out;
    for (std::uint64_t k = u_.first(); k < u_.next(); ++k) {
        steps_ += 1;
        const Msg& m = u_.at(k);
        if (m.sent && m.pl.has_value()) {
            out.push_back(
                make_msg(self_, m.rcv, m.mid, m.pid, m.needs_permit, *m.pl));
        }
    }
    p_.for_each_live([&](std::uint64_t, const Per& per) {
        steps_ += 1;
        out.push_back(make_control(WireKind::Ack, self_, per.snd, per.mid));
    });
    return out;
}

bool OptProcess::quiescent() const {
    if (!u_.empty() || !p_.empty()) {
        return false;
    }
    for (const auto& [sender, chain] : rb_) {
        if (!chain.empty()) {
            return false;
        }
    }
    return true;
}

std::uint64_t OptProcess::steps() const {
    return steps_ + u_.steps() + p_.steps();
}

void OptProcess::check_index_invariants() const {
    auto fail = [](const char* what) {
        throw std::logic_error(std::string("index invariant violated: ") + what);
    };
    // m1: sent prefix, first unsent at m1.
    for (std::uint64_t k = u_.first(); k < m1_ && k < u_.next(); ++k) {
        if (!u_.at(k).sent) fail("m1 prefix contains unsent message");
    }
    if (m1_ >= u_.first() && m1_ < u_.next() && u_.at(m1_).sent) {
        fail("message at m1 already sent");
    }
    // u2: least unacked message to a different receiver than the peek.
    std::uint64_t want_u2 = u_.next();
    if (!u_.empty()) {
        ProcessId r = u_.peek().rcv;
        for (std::uint64_t k = u_.first(); k < u_.next(); ++k) {
            const Msg& m = u_.at(k);
            if (m.pl.has_value() && m.rcv != r) {
                want_u2 = k;
                break;
            }
        }
    }
    if (u2_ != want_u2) fail("u2 out of place");
    // p2: least live permit from a sender other than the first permit's.
    std::uint64_t want_p2 = p_.next();
    if (!p_.empty()) {
        ProcessId s = p_.peek().snd;
        for (std::uint64_t k = p_.first(); k < p_.next(); ++k) {
            if (p_.present(k) && p_.get(k).snd != s) {
                want_p2 = k;
                break;
            }
        }
    }
    if (p2_ != want_p2) fail("p2 out of place");
    // m2: least message depending on the permit at p2.
    std::uint64_t want_m2 = u_.next();
    for (std::uint64_t k = u_.first(); k < u_.next(); ++k) {
        if (u_.at(k).per_index > p2_) {
            want_m2 = k;
            break;
        }
    }
    if (m2_ != want_m2) fail("m2 out of place");
}

}  // namespace causal
