#include "causal/baselines.hpp"

#include <stdexcept>

namespace causal {

std::vector<WireMessage> MfProcess::causal_send(
    const std::vector<ProcessId>& dsts, Payload payload) {
    if (dsts.size() != 1) {
        throw std::invalid_argument("unicast engine requires one destination");
    }
    if (dsts.front() == self_) {
        throw std::invalid_argument("self-send rejected");
    }
    steps_ += 1;
    sb_.push_back(Msg{dsts.front(), ck_, std::move(payload)});
    ck_ += 1;
    std::vector<WireMessage> out;
    try_send(out);
    return out;
}

void MfProcess::try_send(std::vector<WireMessage>& out) {
    if (flight_.has_value() || sb_.empty()) {
        return;
    }
    steps_ += 1;
    flight_ = std::move(sb_.front());
    sb_.pop_front();
    out.push_back(make_msg(self_, flight_->rcv, flight_->mid, 0, false,
                           flight_->pl));
}

HandlerResult MfProcess::on_wire(const WireMessage& w) {
    HandlerResult result;
    steps_ += 1;
    switch (w.kind) {
        case WireKind::Msg:
            if (w.mid <= ld_[w.src]) {
                result.out.push_back(
                    make_control(WireKind::Ack, self_, w.src, w.mid));
                break;
            }
            ld_[w.src] = w.mid;
            result.out.push_back(
                make_control(WireKind::Ack, self_, w.src, w.mid));
            result.delivered.push_back(Delivery{w.src, w.mid, w.payload});
            break;
        case WireKind::Ack:
            if (flight_.has_value() && flight_->mid == w.mid) {
                flight_.reset();
                try_send(result.out);
            }
            break;
        default:
            anomalies_ += 1;
            break;
    }
    return result;
}

std::vector<WireMessage> MfProcess::on_timer() {
    std::vector<WireMessage> out;
    if (flight_.has_value()) {
        steps_ += 1;
        out.push_back(make_msg(self_, flight_->rcv, flight_->mid, 0, false,
                               flight_->pl));
    }
    return out;
}

bool MfProcess::quiescent() const {
    return sb_.empty() && !flight_.has_value();
}

std::vector<WireMessage> CykasProcess::causal_send(
    const std::vector<ProcessId>& dsts, Payload payload) {
    if (dsts.size() != 1) {
        throw std::invalid_argument("unicast engine requires one destination");
    }
    if (dsts.front() == self_) {
        throw std::invalid_argument("self-send rejected");
    }
    steps_ += 1;
    sb_.push_back(Msg{dsts.front(), ck_, std::move(payload)});
    ck_ += 1;
    std::vector<WireMessage> out;
    try_send(out);
    return out;
}

void CykasProcess::try_send(std::vector<WireMessage>& out) {
    while (!sb_.empty()) {
        steps_ += 1;
        if (mode_ > 0) {
            return;  // secret mode: hold everything
        }
        Msg& head = sb_.front();
        if (in_transit_.count(head.rcv) > 0) {
            return;  // one unacked message per destination
        }
        bool eager = unacked_count_ > 0;
        Msg m = std::move(head);
        sb_.pop_front();
        WireMessage w = make_msg(self_, m.rcv, m.mid, 0, false, m.pl);
        w.eager = eager;
        out.push_back(std::move(w));
        in_transit_[m.rcv] = m.mid;
        unacked_count_ += 1;
        sa_.add(Sent{m.rcv, m.mid, eager, false, false});
    }
}

HandlerResult CykasProcess::on_wire(const WireMessage& w) {
    HandlerResult result;
    switch (w.kind) {
        case WireKind::Msg:
            on_msg(w.src, w, result);
            break;
        case WireKind::Ack:
            on_ack(w.src, w.mid, result.out);
            break;
        case WireKind::Yct:
            steps_ += 1;
            if (mode_ == 0) {
                anomalies_ += 1;  // impossible on a fault-free network
                break;
            }
            mode_ -= 1;
            try_send(result.out);
            break;
        default:
            anomalies_ += 1;
            break;
    }
    return result;
}

void CykasProcess::on_msg(ProcessId from, const WireMessage& w,
                          HandlerResult& result) {
    steps_ += 1;
    if (w.mid <= ld_[from]) {
        result.out.push_back(make_control(WireKind::Ack, self_, from, w.mid));
        return;
    }
    ld_[from] = w.mid;
    if (w.eager) {
        mode_ += 1;
    }
    result.out.push_back(make_control(WireKind::Ack, self_, from, w.mid));
    result.delivered.push_back(Delivery{from, w.mid, w.payload});
}

void CykasProcess::on_ack(ProcessId from, MsgId n,
                          std::vector<WireMessage>& out) {
    steps_ += 1;
    if (slot(n) < sa_.first()) {
        return;
    }
    if (slot(n) >= sa_.next()) {
        anomalies_ += 1;
        return;
    }
    Sent& e = sa_.at(slot(n));
    if (!e.acked) {
        e.acked = true;
        unacked_count_ -= 1;
    }
    auto it = in_transit_.find(from);
    if (it != in_transit_.end() && it->second == n) {
        in_transit_.erase(it);
    }
    if (slot(n) == sa_.first()) {
        // Advancing past the acked prefix discharges you-can-tell
        // obligations: when an entry becomes the oldest, everything sent
        // before it is acked.
        while (sa_.size() > 0) {
            steps_ += 1;
            Sent& head = sa_.peek();
            if (head.eager && !head.ycted) {
                out.push_back(
                    make_control(WireKind::Yct, self_, head.rcv, head.mid));
                head.ycted = true;
            }
            if (!head.acked) {
                break;
            }
            sa_.remove();
        }
    }
    try_send(out);
}

std::vector<WireMessage> CykasProcess::on_timer() {
    return {};  // fault-free network: no retransmission
}

bool CykasProcess::quiescent() const {
    return sb_.empty() && sa_.empty() && in_transit_.empty() && mode_ == 0;
}

std::uint64_t CykasProcess::steps() const { return steps_ + sa_.steps(); }

}  // namespace causal
