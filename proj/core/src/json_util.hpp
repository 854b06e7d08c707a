#pragma once

// Private to irl_core: nlohmann/json conversions shared by the serializers.

#include <string>

#include "irl/mdp.hpp"
#include "irl/tables.hpp"
#include "json.hpp"

namespace irl::detail {

using Json = nlohmann::json;

Json to_json(const StateActionTable& table);
StateActionTable state_action_from_json(const Json& j);

Json to_json(const TransitionTable& table);
TransitionTable transition_from_json(const Json& j);

Json to_json(const RewardTable& reward);
RewardTable reward_from_json(const Json& j);

Json to_json(const TabularMdp& mdp);
TabularMdp mdp_from_json(const Json& j);

/// Throws std::invalid_argument naming the first key of `j` not in `allowed`.
void require_known_keys(const Json& j, std::initializer_list<const char*> allowed,
                        const std::string& context);

inline std::string dump(const Json& j, int indent) { return j.dump(indent); }

}  // namespace irl::detail
