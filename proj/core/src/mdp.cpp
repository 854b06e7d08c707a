#include "irl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "irl/random.hpp"
#include "json_util.hpp"

namespace irl {

namespace {

std::size_t expected_size(RewardKind kind, std::size_t n_states, std::size_t n_actions) {
  switch (kind) {
    case RewardKind::state_only:
      return n_states;
    case RewardKind::state_action:
      return n_states * n_actions;
    case RewardKind::transition:
      return n_states * n_actions * n_states;
  }
  return 0;
}

int arity(RewardKind kind) {
  switch (kind) {
    case RewardKind::state_only:
      return 1;
    case RewardKind::state_action:
      return 2;
    case RewardKind::transition:
      return 3;
  }
  return 0;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

void fill_transitions(Rng& rng, TransitionTable& table, const TransitionSpec& spec) {
  const std::size_t n = table.n_states();
  const std::size_t k = (spec.support == 0 || spec.support > n) ? n : spec.support;
  std::vector<std::size_t> order(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < table.n_actions(); ++a) {
      auto row = table.row(s, a);
      std::fill(row.begin(), row.end(), 0.0);
      if (spec.stay_action && a == 0) {
        row[s] = 1.0;
        continue;
      }
      std::iota(order.begin(), order.end(), 0);
      // Partial Fisher-Yates picks k distinct successors.
      for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, n - 1);
        std::swap(order[i], order[pick(rng)]);
      }
      if (k == 1) {
        row[order[0]] = 1.0;
        continue;
      }
      const auto weights = sample_dirichlet(rng, k, spec.concentration);
      for (std::size_t i = 0; i < k; ++i) row[order[i]] = weights[i];
    }
  }
}

}  // namespace

std::string_view to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::state_only:
      return "state_only";
    case RewardKind::state_action:
      return "state_action";
    case RewardKind::transition:
      return "transition";
  }
  return "unknown";
}

RewardKind reward_kind_from_string(std::string_view name) {
  if (name == "state_only") return RewardKind::state_only;
  if (name == "state_action") return RewardKind::state_action;
  if (name == "transition") return RewardKind::transition;
  throw std::invalid_argument("unknown reward kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// RewardTable

RewardTable::RewardTable(RewardKind kind, std::size_t n_states, std::size_t n_actions,
                         std::vector<double> values)
    : kind_(kind), n_states_(n_states), n_actions_(n_actions), values_(std::move(values)) {
  if (values_.size() != expected_size(kind, n_states, n_actions)) {
    throw std::invalid_argument("RewardTable: value count does not match dimensions");
  }
}

RewardTable RewardTable::state_only(std::vector<double> values) {
  const auto n = values.size();
  return {RewardKind::state_only, n, 0, std::move(values)};
}

RewardTable RewardTable::state_action(std::size_t n_states, std::size_t n_actions,
                                      std::vector<double> values) {
  return {RewardKind::state_action, n_states, n_actions, std::move(values)};
}

RewardTable RewardTable::transition(std::size_t n_states, std::size_t n_actions,
                                    std::vector<double> values) {
  return {RewardKind::transition, n_states, n_actions, std::move(values)};
}

RewardTable RewardTable::zeros(RewardKind kind, std::size_t n_states, std::size_t n_actions) {
  const std::size_t actions = kind == RewardKind::state_only ? 0 : n_actions;
  return {kind, n_states, actions, std::vector<double>(expected_size(kind, n_states, actions))};
}

void RewardTable::check_arity(RewardKind requested) const {
  if (requested != kind_) {
    std::ostringstream msg;
    msg << "reward lookup with arity " << arity(requested) << " on a " << to_string(kind_)
        << " table";
    throw std::invalid_argument(msg.str());
  }
}

double RewardTable::at(std::size_t s) const {
  check_arity(RewardKind::state_only);
  return values_.at(s);
}

double RewardTable::at(std::size_t s, std::size_t a) const {
  check_arity(RewardKind::state_action);
  if (s >= n_states_ || a >= n_actions_) throw std::out_of_range("reward index out of range");
  return values_[s * n_actions_ + a];
}

double RewardTable::at(std::size_t s, std::size_t a, std::size_t next) const {
  check_arity(RewardKind::transition);
  if (s >= n_states_ || a >= n_actions_ || next >= n_states_) {
    throw std::out_of_range("reward index out of range");
  }
  return values_[(s * n_actions_ + a) * n_states_ + next];
}

double& RewardTable::mutable_at(std::size_t s) {
  check_arity(RewardKind::state_only);
  return values_.at(s);
}

double& RewardTable::mutable_at(std::size_t s, std::size_t a) {
  check_arity(RewardKind::state_action);
  return values_.at(s * n_actions_ + a);
}

double& RewardTable::mutable_at(std::size_t s, std::size_t a, std::size_t next) {
  check_arity(RewardKind::transition);
  return values_.at((s * n_actions_ + a) * n_states_ + next);
}

double RewardTable::value(std::size_t s, std::size_t a, std::size_t next) const {
  switch (kind_) {
    case RewardKind::state_only:
      return values_[s];
    case RewardKind::state_action:
      return values_[s * n_actions_ + a];
    case RewardKind::transition:
      return values_[(s * n_actions_ + a) * n_states_ + next];
  }
  return 0.0;
}

RewardTable RewardTable::broadcast(RewardKind target, std::size_t n_actions) const {
  if (arity(target) < arity(kind_)) {
    throw std::invalid_argument("RewardTable::broadcast cannot lower the arity");
  }
  if (kind_ != RewardKind::state_only && n_actions != n_actions_) {
    throw std::invalid_argument("RewardTable::broadcast: action count mismatch");
  }
  if (target == kind_) return *this;
  RewardTable out = zeros(target, n_states_, n_actions);
  for (std::size_t s = 0; s < n_states_; ++s) {
    for (std::size_t a = 0; a < n_actions; ++a) {
      if (target == RewardKind::state_action) {
        out.values_[s * n_actions + a] = value(s, a, 0);
        continue;
      }
      for (std::size_t next = 0; next < n_states_; ++next) {
        out.values_[(s * n_actions + a) * n_states_ + next] = value(s, a, next);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate_mdp(const TabularMdp& mdp) {
  std::vector<Violation> out;
  auto report = [&](const std::string& what) { out.push_back({what}); };

  if (mdp.n_states == 0) report("n_states must be positive");
  if (mdp.n_actions == 0) report("n_actions must be positive");
  if (!(mdp.discount > 0.0 && mdp.discount < 1.0)) {
    report("discount " + std::to_string(mdp.discount) + " is outside (0, 1)");
  }
  if (mdp.horizon == 0) report("horizon must be positive");

  const bool shape_ok = mdp.transition.n_states() == mdp.n_states &&
                        mdp.transition.n_actions() == mdp.n_actions;
  if (!shape_ok) {
    report("transition tensor shape does not match (n_states, n_actions, n_states)");
  } else {
    for (std::size_t s = 0; s < mdp.n_states; ++s) {
      for (std::size_t a = 0; a < mdp.n_actions; ++a) {
        const auto row = mdp.transition.row(s, a);
        double sum = 0.0;
        bool negative = false;
        bool finite = true;
        for (double p : row) {
          if (!std::isfinite(p)) finite = false;
          if (p < 0.0) negative = true;
          sum += p;
        }
        const std::string where = "(" + std::to_string(s) + ", " + std::to_string(a) + ")";
        if (!finite) {
          report("transition row " + where + " has a non-finite entry");
        } else if (negative) {
          report("transition row " + where + " has a negative entry");
        } else if (std::abs(sum - 1.0) > 1e-12) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "transition row " << where << " sums to " << sum;
          report(msg.str());
        }
      }
    }
  }

  if (mdp.initial_dist.size() != mdp.n_states) {
    report("initial_dist has " + std::to_string(mdp.initial_dist.size()) + " entries, expected " +
           std::to_string(mdp.n_states));
  } else {
    double sum = 0.0;
    bool bad = false;
    for (double p : mdp.initial_dist) {
      if (!std::isfinite(p) || p < 0.0) bad = true;
      sum += p;
    }
    if (bad) {
      report("initial_dist has a negative or non-finite entry");
    } else if (std::abs(sum - 1.0) > 1e-12) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "initial_dist sums to " << sum;
      report(msg.str());
    }
  }

  const auto& r = mdp.reward;
  const bool reward_shape_ok =
      r.n_states() == mdp.n_states &&
      (r.kind() == RewardKind::state_only || r.n_actions() == mdp.n_actions);
  if (!reward_shape_ok) {
    report("reward table shape does not match the MDP");
  } else {
    const auto values = r.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (std::isfinite(values[i])) continue;
      std::string index;
      switch (r.kind()) {
        case RewardKind::state_only:
          index = "(" + std::to_string(i) + ")";
          break;
        case RewardKind::state_action:
          index = "(" + std::to_string(i / mdp.n_actions) + ", " +
                  std::to_string(i % mdp.n_actions) + ")";
          break;
        case RewardKind::transition: {
          const std::size_t next = i % mdp.n_states;
          const std::size_t sa = i / mdp.n_states;
          index = "(" + std::to_string(sa / mdp.n_actions) + ", " +
                  std::to_string(sa % mdp.n_actions) + ", " + std::to_string(next) + ")";
          break;
        }
      }
      report("reward entry " + index + " is not finite");
    }
  }
  return out;
}

void require_valid(const TabularMdp& mdp) {
  const auto violations = validate_mdp(mdp);
  if (violations.empty()) return;
  std::string msg = "invalid MDP:";
  for (const auto& v : violations) msg += "\n  " + v.what;
  throw std::invalid_argument(msg);
}

// ---------------------------------------------------------------------------
// Generation

TransitionTable random_transitions(std::size_t n_states, std::size_t n_actions,
                                   const TransitionSpec& spec, std::uint64_t seed) {
  if (n_states == 0 || n_actions == 0) {
    throw std::invalid_argument("random_transitions: zero-dimension input");
  }
  Rng rng(seed);
  TransitionTable table(n_states, n_actions);
  fill_transitions(rng, table, spec);
  return table;
}

TabularMdp random_mdp(std::size_t n_states, std::size_t n_actions, const RewardTable& reward,
                      std::uint64_t seed, const RandomMdpOptions& options) {
  if (n_states == 0 || n_actions == 0) {
    throw std::invalid_argument("random_mdp: zero-dimension input");
  }
  if (n_states < 2) throw std::invalid_argument("random_mdp: need at least 2 states");
  if (reward.n_states() != n_states ||
      (reward.kind() != RewardKind::state_only && reward.n_actions() != n_actions)) {
    throw std::invalid_argument("random_mdp: reward shape does not match dimensions");
  }
  if (!(options.transitions.concentration > 0.0)) {
    throw std::invalid_argument("random_mdp: concentration must be positive");
  }

  TabularMdp mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.reward = reward;
  mdp.discount = options.discount;
  mdp.horizon = options.horizon;
  mdp.initial_dist = options.initial_dist.empty()
                         ? std::vector<double>(n_states, 1.0 / static_cast<double>(n_states))
                         : options.initial_dist;
  mdp.transition = TransitionTable(n_states, n_actions);

  Rng rng(seed);
  constexpr int kMaxAttempts = 100000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    fill_transitions(rng, mdp.transition, options.transitions);
    if (options.require_decomposable && !decomposability_check(mdp).is_decomposable) continue;
    if (options.require_reachable) {
      const auto reach = reachable_states(mdp);
      if (!std::all_of(reach.begin(), reach.end(), [](bool b) { return b; })) continue;
    }
    require_valid(mdp);
    return mdp;
  }
  throw std::runtime_error("random_mdp: could not satisfy the structural requirements");
}

RewardTable indicator_reward(std::size_t n_states, std::size_t state) {
  if (state >= n_states) throw std::invalid_argument("indicator_reward: state out of range");
  std::vector<double> values(n_states, 0.0);
  values[state] = 1.0;
  return RewardTable::state_only(std::move(values));
}

TransitionSpec tabular_transition_spec() { return TransitionSpec{.support = 1}; }

TabularMdp tabular_task_mdp(std::uint64_t seed, double discount, std::size_t horizon) {
  RandomMdpOptions options;
  options.transitions = tabular_transition_spec();
  options.initial_dist.assign(kTabularStates, 0.0);
  options.initial_dist[kTabularStartState] = 1.0;
  options.discount = discount;
  options.horizon = horizon;
  options.require_decomposable = true;
  options.require_reachable = true;
  return random_mdp(kTabularStates, kTabularActions,
                    indicator_reward(kTabularStates, kTabularGoalState), seed, options);
}

TabularMdp add_self_transitions(const TabularMdp& mdp, double weight) {
  if (!(weight > 0.0 && weight < 1.0)) {
    throw std::invalid_argument("add_self_transitions: weight must lie in (0, 1)");
  }
  require_valid(mdp);
  TabularMdp out = mdp;
  for (std::size_t s = 0; s < mdp.n_states; ++s) {
    for (std::size_t a = 0; a < mdp.n_actions; ++a) {
      auto row = out.transition.row(s, a);
      for (auto& p : row) p *= (1.0 - weight);
      row[s] += weight;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Decomposability

DecompositionReport decomposability_check(const TabularMdp& mdp) {
  const std::size_t n = mdp.n_states;
  UnionFind classes(n);
  for (std::size_t s = 0; s < n; ++s) {
    std::size_t first = n;
    for (std::size_t next = 0; next < n; ++next) {
      bool reached = false;
      for (std::size_t a = 0; a < mdp.n_actions && !reached; ++a) {
        reached = mdp.transition(s, a, next) > kPositiveProbability;
      }
      if (!reached) continue;
      if (first == n) {
        first = next;
      } else {
        classes.unite(first, next);
      }
    }
  }

  DecompositionReport report;
  std::vector<std::vector<std::size_t>> by_root(n);
  for (std::size_t s = 0; s < n; ++s) by_root[classes.find(s)].push_back(s);
  for (auto& c : by_root) {
    if (!c.empty()) report.linked_classes.push_back(std::move(c));
  }
  report.is_decomposable = report.linked_classes.size() == 1;
  return report;
}

std::vector<bool> reachable_states(const TabularMdp& mdp) {
  std::vector<bool> seen(mdp.n_states, false);
  std::vector<std::size_t> frontier;
  for (std::size_t s = 0; s < mdp.n_states; ++s) {
    if (mdp.initial_dist[s] > kPositiveProbability) {
      seen[s] = true;
      frontier.push_back(s);
    }
  }
  while (!frontier.empty()) {
    const std::size_t s = frontier.back();
    frontier.pop_back();
    for (std::size_t a = 0; a < mdp.n_actions; ++a) {
      for (std::size_t next = 0; next < mdp.n_states; ++next) {
        if (!seen[next] && mdp.transition(s, a, next) > kPositiveProbability) {
          seen[next] = true;
          frontier.push_back(next);
        }
      }
    }
  }
  return seen;
}

// ---------------------------------------------------------------------------
// Counterexample

TabularMdp counterexample_mdp(CounterexampleVariant variant, double discount,
                              std::size_t horizon) {
  using namespace counterexample;
  if (!(discount > 0.0 && discount < 1.0)) {
    throw std::invalid_argument("counterexample_mdp: discount must lie in (0, 1)");
  }
  TabularMdp mdp;
  mdp.n_states = 3;
  mdp.n_actions = 2;
  mdp.discount = discount;
  mdp.horizon = horizon;
  mdp.initial_dist = {1.0, 0.0, 0.0};
  mdp.transition = TransitionTable(3, 2);

  const bool swapped = variant == CounterexampleVariant::modified;
  mdp.transition(S, action_a, swapped ? B : A) = 1.0;
  mdp.transition(S, action_b, swapped ? A : B) = 1.0;
  for (std::size_t a = 0; a < 2; ++a) {
    mdp.transition(A, a, S) = 1.0;
    mdp.transition(B, a, S) = 1.0;
  }

  mdp.reward = RewardTable::zeros(RewardKind::transition, 3, 2);
  for (std::size_t a = 0; a < 2; ++a) {
    mdp.reward.mutable_at(A, a, S) = 1.0;
    mdp.reward.mutable_at(B, a, S) = -1.0;
  }
  return mdp;
}

RewardTable counterexample_shaped_reward() {
  using namespace counterexample;
  RewardTable r = RewardTable::zeros(RewardKind::state_action, 3, 2);
  r.mutable_at(S, action_a) = 1.0;
  r.mutable_at(S, action_b) = -1.0;
  return r;
}

std::vector<double> counterexample_potential() { return {0.0, 1.0, -1.0}; }

// ---------------------------------------------------------------------------
// JSON

std::string mdp_to_json(const TabularMdp& mdp, int indent) {
  return detail::dump(detail::to_json(mdp), indent);
}

TabularMdp mdp_from_json(std::string_view text) {
  return detail::mdp_from_json(detail::Json::parse(text));
}

std::string reward_to_json(const RewardTable& reward, int indent) {
  return detail::dump(detail::to_json(reward), indent);
}

RewardTable reward_from_json(std::string_view text) {
  return detail::reward_from_json(detail::Json::parse(text));
}

}  // namespace irl
