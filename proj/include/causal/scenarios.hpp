#pragma once

#include <string>
#include <vector>

#include "causal/netsim.hpp"

namespace causal {

struct Scenario {
    std::string name;
    NetConfig config;
    std::vector<ProcessId> processes;
    std::vector<Action> script;
    Tick tick_limit = 1000000;
    EngineKind engine = EngineKind::Basic;
};

enum class FaultProfile { None, Light, Heavy };

FaultProfile fault_profile_from_name(const std::string& name);

/// Names accepted by builtin_scenario.
std::vector<std::string> builtin_scenario_names();

/// Fixed-latency constructions (residency_order, cykas_starvation,
/// multicast_counterexample, improvement1..3, mf_load) by name.
/// Throws std::invalid_argument for unknown names.
Scenario builtin_scenario(const std::string& name);

/// Deterministic random unicast workload.
Scenario random_scenario(std::uint64_t seed, std::uint32_t n,
                         std::uint32_t messages, FaultProfile profile);

/// Same, with destination sets of up to 3 processes per send.
Scenario random_mcast_scenario(std::uint64_t seed, std::uint32_t n,
                               std::uint32_t messages, FaultProfile profile);

}  // namespace causal
