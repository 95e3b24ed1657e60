#pragma once

// JSON schemas for the structured config and result documents. Field names
// and their order are part of the external interface; a golden-file test
// pins them.

#include <json.hpp>

#include "twoit/decision.hpp"
#include "twoit/hypothesis.hpp"
#include "twoit/posterior.hpp"

namespace twoit::cli {

using json = nlohmann::ordered_json;

json to_json(const IntervalHypothesis& h);
json to_json(const HypothesisPair& pair);
json to_json(const PosteriorSummary& summary);
json to_json(const Verdict& verdict);
json to_json(const BetaPrior& prior);
json to_json(const NormalPrior& prior);

// Rebuilds a validated pair (make_pair / complement_pair) from the schema
// emitted by to_json; round-trips exactly.
HypothesisPair pair_from_json(const json& j);

// Flattens a result document into a two-line CSV (dotted header + row).
std::string to_flat_csv(const json& doc);

Scale scale_from_string(const std::string& name);
DecisionRule rule_from_string(const std::string& name);

}  // namespace twoit::cli
