#include "json_util.hpp"

#include <stdexcept>

namespace irl::detail {

namespace {

std::vector<double> flat_numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw std::invalid_argument(std::string(what) + " must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::size_t count_field(const Json& j, const char* key) {
  if (!j.contains(key)) throw std::invalid_argument(std::string("missing key '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw std::invalid_argument(std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

}  // namespace

void require_known_keys(const Json& j, std::initializer_list<const char*> allowed,
                        const std::string& context) {
  if (!j.is_object()) throw std::invalid_argument(context + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) {
      throw std::invalid_argument("unknown key '" + item.key() + "' in " + context);
    }
  }
}

Json to_json(const StateActionTable& table) {
  Json rows = Json::array();
  for (std::size_t s = 0; s < table.n_states(); ++s) {
    const auto row = table.row(s);
    rows.push_back(Json(std::vector<double>(row.begin(), row.end())));
  }
  return rows;
}

StateActionTable state_action_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("table must be a nonempty array");
  const std::size_t n_actions = j.front().size();
  StateActionTable out(j.size(), n_actions);
  for (std::size_t s = 0; s < j.size(); ++s) {
    const auto row = flat_numbers(j[s], "table row");
    if (row.size() != n_actions) throw std::invalid_argument("ragged state-action table");
    std::copy(row.begin(), row.end(), out.row(s).begin());
  }
  return out;
}

Json to_json(const TransitionTable& table) {
  Json out = Json::array();
  for (std::size_t s = 0; s < table.n_states(); ++s) {
    Json per_action = Json::array();
    for (std::size_t a = 0; a < table.n_actions(); ++a) {
      const auto row = table.row(s, a);
      per_action.push_back(Json(std::vector<double>(row.begin(), row.end())));
    }
    out.push_back(std::move(per_action));
  }
  return out;
}

TransitionTable transition_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j.front().is_array() || j.front().empty()) {
    throw std::invalid_argument("transition table must be a nonempty nested array");
  }
  const std::size_t n_states = j.size();
  const std::size_t n_actions = j.front().size();
  TransitionTable out(n_states, n_actions);
  for (std::size_t s = 0; s < n_states; ++s) {
    if (!j[s].is_array() || j[s].size() != n_actions) {
      throw std::invalid_argument("ragged transition table");
    }
    for (std::size_t a = 0; a < n_actions; ++a) {
      const auto row = flat_numbers(j[s][a], "transition row");
      if (row.size() != n_states) throw std::invalid_argument("ragged transition table");
      std::copy(row.begin(), row.end(), out.row(s, a).begin());
    }
  }
  return out;
}

Json to_json(const RewardTable& reward) {
  Json values;
  const auto v = reward.values();
  const std::size_t ns = reward.n_states();
  const std::size_t na = reward.n_actions();
  switch (reward.kind()) {
    case RewardKind::state_only:
      values = std::vector<double>(v.begin(), v.end());
      break;
    case RewardKind::state_action:
      values = Json::array();
      for (std::size_t s = 0; s < ns; ++s) {
        values.push_back(std::vector<double>(v.begin() + s * na, v.begin() + (s + 1) * na));
      }
      break;
    case RewardKind::transition:
      values = Json::array();
      for (std::size_t s = 0; s < ns; ++s) {
        Json per_action = Json::array();
        for (std::size_t a = 0; a < na; ++a) {
          const auto begin = v.begin() + (s * na + a) * ns;
          per_action.push_back(std::vector<double>(begin, begin + ns));
        }
        values.push_back(std::move(per_action));
      }
      break;
  }
  return Json{{"kind", std::string(to_string(reward.kind()))}, {"values", std::move(values)}};
}

RewardTable reward_from_json(const Json& j) {
  require_known_keys(j, {"kind", "values"}, "reward");
  if (!j.contains("kind") || !j.contains("values")) {
    throw std::invalid_argument("reward needs 'kind' and 'values'");
  }
  const auto kind = reward_kind_from_string(j.at("kind").get<std::string>());
  const Json& values = j.at("values");
  switch (kind) {
    case RewardKind::state_only:
      return RewardTable::state_only(flat_numbers(values, "reward values"));
    case RewardKind::state_action: {
      const auto table = state_action_from_json(values);
      const auto flat = table.values();
      return RewardTable::state_action(table.n_states(), table.n_actions(),
                                       std::vector<double>(flat.begin(), flat.end()));
    }
    case RewardKind::transition: {
      const auto table = transition_from_json(values);
      const auto flat = table.values();
      return RewardTable::transition(table.n_states(), table.n_actions(),
                                     std::vector<double>(flat.begin(), flat.end()));
    }
  }
  throw std::invalid_argument("unreachable reward kind");
}

Json to_json(const TabularMdp& mdp) {
  return Json{{"n_states", mdp.n_states},
              {"n_actions", mdp.n_actions},
              {"discount", mdp.discount},
              {"horizon", mdp.horizon},
              {"initial_dist", mdp.initial_dist},
              {"transition", to_json(mdp.transition)},
              {"reward", to_json(mdp.reward)}};
}

TabularMdp mdp_from_json(const Json& j) {
  require_known_keys(j,
                     {"n_states", "n_actions", "discount", "horizon", "initial_dist",
                      "transition", "reward"},
                     "MDP document");
  TabularMdp mdp;
  mdp.n_states = count_field(j, "n_states");
  mdp.n_actions = count_field(j, "n_actions");
  mdp.horizon = count_field(j, "horizon");
  if (!j.contains("discount") || !j.at("discount").is_number()) {
    throw std::invalid_argument("MDP document needs a numeric 'discount'");
  }
  mdp.discount = j.at("discount").get<double>();
  if (!j.contains("initial_dist")) throw std::invalid_argument("missing key 'initial_dist'");
  mdp.initial_dist = flat_numbers(j.at("initial_dist"), "initial_dist");
  if (!j.contains("transition")) throw std::invalid_argument("missing key 'transition'");
  mdp.transition = transition_from_json(j.at("transition"));
  if (!j.contains("reward")) throw std::invalid_argument("missing key 'reward'");
  mdp.reward = reward_from_json(j.at("reward"));
  if (mdp.transition.n_states() != mdp.n_states || mdp.transition.n_actions() != mdp.n_actions) {
    throw std::invalid_argument("transition shape disagrees with n_states/n_actions");
  }
  return mdp;
}

}  // namespace irl::detail
