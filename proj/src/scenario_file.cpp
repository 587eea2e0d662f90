#include "causal/scenario_file.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace causal {
namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (allowed.count(key) == 0) {
            throw std::invalid_argument("unknown key \"" + key + "\" in " +
                                        where);
        }
    }
}

NetConfig parse_net(const json& net) {
    NetConfig cfg;
    require_keys(net,
                 {"seed", "latency_min", "latency_max", "loss_prob",
                  "dup_prob", "reorder_jitter", "max_loss_streak",
                  "timer_period", "links"},
                 "net");
    cfg.seed = net.value("seed", cfg.seed);
    cfg.latency_min = net.value("latency_min", cfg.latency_min);
    cfg.latency_max = net.value("latency_max", cfg.latency_max);
    cfg.loss_prob = net.value("loss_prob", cfg.loss_prob);
    cfg.dup_prob = net.value("dup_prob", cfg.dup_prob);
    cfg.reorder_jitter = net.value("reorder_jitter", cfg.reorder_jitter);
    cfg.max_loss_streak = net.value("max_loss_streak", cfg.max_loss_streak);
    cfg.timer_period = net.value("timer_period", cfg.timer_period);
    if (cfg.latency_max < cfg.latency_min) {
        throw std::invalid_argument("latency_max below latency_min");
    }
    if (cfg.loss_prob < 0 || cfg.loss_prob > 1 || cfg.dup_prob < 0 ||
        cfg.dup_prob > 1) {
        throw std::invalid_argument("probabilities must lie in [0,1]");
    }
    if (cfg.max_loss_streak == 0 || cfg.timer_period == 0) {
        throw std::invalid_argument(
            "max_loss_streak and timer_period must be positive");
    }
    if (net.contains("links")) {
        for (const json& link : net.at("links")) {
            require_keys(link, {"src", "dst", "min", "max"}, "links");
            Tick lo = link.at("min").get<Tick>();
            Tick hi = link.at("max").get<Tick>();
            if (hi < lo) {
                throw std::invalid_argument("link max below min");
            }
            cfg.link_latency[{link.at("src").get<std::uint64_t>(),
                              link.at("dst").get<std::uint64_t>()}] = {lo, hi};
        }
    }
    return cfg;
}

std::vector<std::uint64_t> parse_args(const std::string& ref,
                                      std::size_t open) {
    if (ref.back() != ')') {
        throw std::invalid_argument("malformed scenario spec: " + ref);
    }
    std::vector<std::uint64_t> out;
    std::string inner = ref.substr(open + 1, ref.size() - open - 2);
    std::istringstream in(inner);
    std::string field;
    while (std::getline(in, field, ',')) {
        out.push_back(std::stoull(field));
    }
    return out;
}

FaultProfile profile_arg(const std::string& ref, std::size_t open) {
    // last argument is the profile name
    std::string inner = ref.substr(open + 1, ref.size() - open - 2);
    auto comma = inner.rfind(',');
    if (comma == std::string::npos) {
        throw std::invalid_argument("malformed scenario spec: " + ref);
    }
    return fault_profile_from_name(inner.substr(comma + 1));
}

}  // namespace

Scenario parse_scenario_json(const std::string& text) {
    json doc = json::parse(text);
    require_keys(doc,
                 {"name", "engine", "processes", "net", "tick_limit",
                  "script"},
                 "scenario");
    Scenario s;
    s.name = doc.value("name", std::string("scenario"));
    s.engine = engine_kind_from_name(doc.value("engine", std::string("basic")));
    if (!doc.contains("processes") || !doc.contains("script")) {
        throw std::invalid_argument("scenario needs processes and script");
    }
    std::set<std::uint64_t> declared;
    for (const json& p : doc.at("processes")) {
        std::uint64_t id = p.get<std::uint64_t>();
        if (!declared.insert(id).second) {
            throw std::invalid_argument("duplicate process id");
        }
        s.processes.push_back(ProcessId{id});
    }
    if (doc.contains("net")) {
        s.config = parse_net(doc.at("net"));
    }
    s.tick_limit = doc.value("tick_limit", s.tick_limit);
    for (const json& a : doc.at("script")) {
        require_keys(a, {"tick", "src", "dst", "dsts", "payload"}, "script");
        Action action;
        action.tick = a.at("tick").get<Tick>();
        action.src = ProcessId{a.at("src").get<std::uint64_t>()};
        if (a.contains("dst") == a.contains("dsts")) {
            throw std::invalid_argument(
                "script action needs exactly one of dst / dsts");
        }
        if (a.contains("dst")) {
            action.dsts.push_back(ProcessId{a.at("dst").get<std::uint64_t>()});
        } else {
            for (const json& d : a.at("dsts")) {
                action.dsts.push_back(ProcessId{d.get<std::uint64_t>()});
            }
        }
        action.payload = a.value("payload", std::string("p"));
        if (declared.count(action.src.value) == 0) {
            throw std::invalid_argument("script references unknown process");
        }
        for (ProcessId d : action.dsts) {
            if (declared.count(d.value) == 0) {
                throw std::invalid_argument(
                    "script references unknown process");
            }
        }
        s.script.push_back(std::move(action));
    }
    return s;
}

Scenario load_scenario(const std::string& ref) {
    for (const std::string& name : builtin_scenario_names()) {
        if (ref == name) {
            return builtin_scenario(ref);
        }
    }
    if (ref.rfind("random(", 0) == 0 || ref.rfind("random_mcast(", 0) == 0) {
        std::size_t open = ref.find('(');
        FaultProfile profile = profile_arg(ref, open);
        std::string inner = ref.substr(open + 1, ref.size() - open - 2);
        std::string numbers = inner.substr(0, inner.rfind(','));
        std::vector<std::uint64_t> args = parse_args(ref.substr(0, open) +
                                                     "(" + numbers + ")",
                                                     open);
        if (args.size() != 3) {
            throw std::invalid_argument(
                "expected random(seed,n,messages,profile)");
        }
        auto n = static_cast<std::uint32_t>(args[1]);
        auto messages = static_cast<std::uint32_t>(args[2]);
        if (ref.rfind("random_mcast(", 0) == 0) {
            return random_mcast_scenario(args[0], n, messages, profile);
        }
        return random_scenario(args[0], n, messages, profile);
    }
    std::ifstream in(ref);
    if (!in) {
        throw std::invalid_argument("cannot open scenario: " + ref);
    }
    std::ostringstream text;
    text << in.rdbuf();
    try {
        return parse_scenario_json(text.str());
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("bad scenario file " + ref + ": " +
                                    e.what());
    }
}

}  // namespace causal
