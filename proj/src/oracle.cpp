#include "causal/oracle.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace causal {

bool hb_less(const HbClock& a, const HbClock& b) {
    for (const auto& [proc, count] : a) {
        auto it = b.find(proc);
        std::uint64_t other = it == b.end() ? 0 : it->second;
        if (count > other) {
            return false;
        }
    }
    for (const auto& [proc, count] : b) {
        auto it = a.find(proc);
        std::uint64_t own = it == a.end() ? 0 : it->second;
        if (count > own) {
            return true;
        }
    }
    return false;
}

std::map<MsgKey, HbClock> stamp_trace(const TraceLog& trace) {
    std::map<MsgKey, HbClock> stamps;
    std::unordered_map<ProcessId, HbClock, ProcessIdHash> clocks;
    for (const TraceRecord& r : trace.records) {
        if (r.event == TraceEvent::C) {
            MsgKey key{r.process, r.mid};
            if (stamps.count(key) > 0) {
                continue;  // further destinations of one multicast
            }
            HbClock& clock = clocks[r.process];
            clock[r.process.value] += 1;
            stamps.emplace(key, clock);
        } else if (r.event == TraceEvent::D) {
            MsgKey key{r.peer, r.mid};
            auto it = stamps.find(key);
            if (it == stamps.end()) {
                throw std::invalid_argument(
                    "trace delivers a message never causal-sent");
            }
            HbClock& clock = clocks[r.process];
            for (const auto& [proc, count] : it->second) {
                std::uint64_t& own = clock[proc];
                if (count > own) {
                    own = count;
                }
            }
        }
    }
    return stamps;
}

std::string Verdict::serialize() const {
    std::ostringstream out;
    out << (ok ? "ok" : "fail") << '\n';
    for (const Violation& v : violations) {
        out << (v.kind == Violation::Kind::Causal ? "causal" : "fifo") << '\t'
            << v.destination.value << '\t' << v.earlier.sender.value << ':'
            << v.earlier.mid << '\t' << v.later.sender.value << ':'
            << v.later.mid << '\n';
    }
    for (const Undelivered& u : undelivered) {
        out << "undelivered\t" << u.destination.value << '\t'
            << u.key.sender.value << ':' << u.key.mid << '\n';
    }
    return out.str();
}

Verdict check(const TraceLog& trace) {
    Verdict verdict;
    auto stamps = stamp_trace(trace);
    // Per destination: the largest clock component per sender seen over
    // all deliveries so far. Delivering m is a causal violation exactly
    // when some earlier delivery already carried m's own component.
    std::map<ProcessId, std::map<std::uint64_t, std::uint64_t>> maxseen;
    std::map<ProcessId, std::vector<MsgKey>> delivered_at;
    std::map<std::pair<ProcessId, ProcessId>, MsgId> fifo_last;
    std::set<std::pair<MsgKey, ProcessId>> expected;

    for (const TraceRecord& r : trace.records) {
        if (r.event == TraceEvent::C) {
            expected.emplace(MsgKey{r.process, r.mid}, r.peer);
        } else if (r.event == TraceEvent::D) {
            MsgKey key{r.peer, r.mid};
            const HbClock& clock = stamps.at(key);
            std::uint64_t own = clock.at(key.sender.value);
            auto& seen = maxseen[r.process];
            auto it = seen.find(key.sender.value);
            if (it != seen.end() && it->second >= own) {
                // Slow path only to report the offending pair.
                for (const MsgKey& e : delivered_at[r.process]) {
                    auto comp = stamps.at(e).find(key.sender.value);
                    if (comp != stamps.at(e).end() && comp->second >= own) {
                        verdict.violations.push_back(Violation{
                            r.process, e, key, Violation::Kind::Causal});
                        break;
                    }
                }
            }
            for (const auto& [proc, count] : clock) {
                std::uint64_t& m = seen[proc];
                if (count > m) {
                    m = count;
                }
            }
            MsgId& last = fifo_last[{r.process, key.sender}];
            if (key.mid <= last) {
                verdict.violations.push_back(
                    Violation{r.process, MsgKey{key.sender, last}, key,
                              Violation::Kind::Fifo});
            } else {
                last = key.mid;
            }
            delivered_at[r.process].push_back(key);
            expected.erase({key, r.process});
        }
    }
    for (const auto& [key, dst] : expected) {
        verdict.undelivered.push_back(Undelivered{key, dst});
    }
    verdict.ok = verdict.violations.empty() && verdict.undelivered.empty();
    return verdict;
}

std::set<std::pair<MsgKey, MsgKey>> brute_force_hb(const TraceLog& trace) {
    struct Node {
        bool is_c = false;
        MsgKey key;
    };
    std::vector<Node> nodes;
    std::map<ProcessId, std::vector<std::size_t>> per_process;
    std::map<MsgKey, std::size_t> c_node;
    std::vector<std::vector<std::size_t>> edges;

    for (const TraceRecord& r : trace.records) {
        if (r.event == TraceEvent::C) {
            MsgKey key{r.process, r.mid};
            if (c_node.count(key) > 0) {
                continue;
            }
            c_node[key] = nodes.size();
            per_process[r.process].push_back(nodes.size());
            nodes.push_back(Node{true, key});
        } else if (r.event == TraceEvent::D) {
            per_process[r.process].push_back(nodes.size());
            nodes.push_back(Node{false, MsgKey{r.peer, r.mid}});
        }
    }
    if (c_node.size() > 200) {
        throw std::length_error("brute-force check limited to 200 messages");
    }
    edges.resize(nodes.size());
    for (const auto& [p, seq] : per_process) {
        for (std::size_t i = 1; i < seq.size(); ++i) {
            edges[seq[i - 1]].push_back(seq[i]);
        }
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].is_c) {
            auto it = c_node.find(nodes[i].key);
            if (it == c_node.end()) {
                throw std::invalid_argument(
                    "trace delivers a message never causal-sent");
            }
            edges[it->second].push_back(i);
        }
    }

    std::set<std::pair<MsgKey, MsgKey>> relation;
    for (const auto& [key, start] : c_node) {
        std::vector<bool> seen(nodes.size(), false);
        std::deque<std::size_t> work;
        for (std::size_t next : edges[start]) {
            work.push_back(next);
        }
        while (!work.empty()) {
            std::size_t n = work.front();
            work.pop_front();
            if (seen[n]) {
                continue;
            }
            seen[n] = true;
            if (nodes[n].is_c && nodes[n].key != key) {
                relation.emplace(key, nodes[n].key);
            }
            for (std::size_t next : edges[n]) {
                work.push_back(next);
            }
        }
    }
    return relation;
}

std::set<std::pair<MsgKey, MsgKey>> clock_hb(const TraceLog& trace) {
    auto stamps = stamp_trace(trace);
    std::set<std::pair<MsgKey, MsgKey>> relation;
    for (const auto& [k1, c1] : stamps) {
        for (const auto& [k2, c2] : stamps) {
            if (k1 != k2 && hb_less(c1, c2)) {
                relation.emplace(k1, k2);
            }
        }
    }
    return relation;
}

}  // namespace causal
