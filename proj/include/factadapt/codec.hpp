#pragma once

#include <json.hpp>

#include "factadapt/types.hpp"

namespace factadapt {

using Json = nlohmann::ordered_json;

Json to_json(const Sample& s);
Json to_json(const EntityMention& m);
Json to_json(const PoolEntry& e, const std::string& category);
Json to_json(const CandidatePool& p);
Json to_json(const GroupSpec& g);
Json to_json(const ValidationConfig& c);
Json to_json(const CounterfactualSample& cf);
Json to_json(const MetricsReport& r);

Sample sample_from_json(const Json& j);
EntityMention mention_from_json(const Json& j);
CandidatePool pool_from_json(const Json& j);
GroupSpec group_spec_from_json(const Json& j);
ValidationConfig validation_config_from_json(const Json& j);
CounterfactualSample counterfactual_from_json(const Json& j);
MetricsReport report_from_json(const Json& j);

// Validates a raw record into a Sample: id/document/summary required,
// both texts non-empty after trimming. Split defaults to train.
Sample validate_sample(const Json& raw);

}  // namespace factadapt
