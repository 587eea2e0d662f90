#pragma once

#include <string>

#include "causal/scenarios.hpp"

namespace causal {

/// Parse a JSON scenario document. Unknown keys are an error.
Scenario parse_scenario_json(const std::string& text);

/// Resolve a scenario reference: a built-in name, a spec of the form
/// random(seed,n,messages,profile) or random_mcast(...), or a path to
/// a JSON file. Throws std::invalid_argument on bad input.
Scenario load_scenario(const std::string& ref);

}  // namespace causal
