#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irl/tables.hpp"

namespace irl {

enum class RewardKind { state_only, state_action, transition };

std::string_view to_string(RewardKind kind);
RewardKind reward_kind_from_string(std::string_view name);

/// Reward r(s), r(s,a) or r(s,a,s') stored densely.
///
/// Strict accessors (`at`) reject lookups whose arity differs from the kind.
/// `value(s, a, next)` is the broadcast lookup used when a reward of any kind
/// is evaluated on a realized transition.
class RewardTable {
 public:
  RewardTable() = default;

  static RewardTable state_only(std::vector<double> values);
  static RewardTable state_action(std::size_t n_states, std::size_t n_actions,
                                  std::vector<double> values);
  static RewardTable transition(std::size_t n_states, std::size_t n_actions,
                                std::vector<double> values);
  static RewardTable zeros(RewardKind kind, std::size_t n_states, std::size_t n_actions);

  RewardKind kind() const { return kind_; }
  std::size_t n_states() const { return n_states_; }
  /// Zero for state-only tables.
  std::size_t n_actions() const { return n_actions_; }

  double at(std::size_t s) const;
  double at(std::size_t s, std::size_t a) const;
  double at(std::size_t s, std::size_t a, std::size_t next) const;

  double& mutable_at(std::size_t s);
  double& mutable_at(std::size_t s, std::size_t a);
  double& mutable_at(std::size_t s, std::size_t a, std::size_t next);

  double value(std::size_t s, std::size_t a, std::size_t next) const;

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Re-expresses the table at a higher (or equal) arity by replication.
  RewardTable broadcast(RewardKind target, std::size_t n_actions) const;

  bool operator==(const RewardTable&) const = default;

 private:
  RewardTable(RewardKind kind, std::size_t n_states, std::size_t n_actions,
              std::vector<double> values);
  void check_arity(RewardKind requested) const;

  RewardKind kind_ = RewardKind::state_only;
  std::size_t n_states_ = 0;
  std::size_t n_actions_ = 0;
  std::vector<double> values_;
};

/// Finite MDP (S, A, T, r, gamma, rho0) plus an episode horizon.
///
/// This is a plain aggregate; it may hold invalid data. `validate_mdp` reports
/// violations and operations that need a valid MDP call `require_valid`.
struct TabularMdp {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  TransitionTable transition;  // T(s' | s, a)
  RewardTable reward;          // ground truth
  double discount = 0.9;
  std::vector<double> initial_dist;
  std::size_t horizon = 20;
};

struct Violation {
  std::string what;
  bool operator==(const Violation&) const = default;
};

std::vector<Violation> validate_mdp(const TabularMdp& mdp);

/// Throws std::invalid_argument listing every violation.
void require_valid(const TabularMdp& mdp);

/// How transition rows are drawn: each (s,a) row puts Dirichlet(concentration)
/// mass on `support` distinct successors chosen uniformly (0 = all states).
/// With `stay_action`, action 0 deterministically stays in place.
struct TransitionSpec {
  std::size_t support = 0;
  double concentration = 1.0;
  bool stay_action = false;
};

struct RandomMdpOptions {
  TransitionSpec transitions;
  std::vector<double> initial_dist;  // empty = uniform
  double discount = 0.9;
  std::size_t horizon = 20;
  /// Redraw transitions until the decomposability condition holds.
  bool require_decomposable = false;
  /// Redraw transitions until every state is reachable from the support of
  /// the initial distribution.
  bool require_reachable = false;
};

TabularMdp random_mdp(std::size_t n_states, std::size_t n_actions, const RewardTable& reward,
                      std::uint64_t seed, const RandomMdpOptions& options = {});

/// Draws one transition tensor with the same generator `random_mdp` uses.
TransitionTable random_transitions(std::size_t n_states, std::size_t n_actions,
                                   const TransitionSpec& spec, std::uint64_t seed);

/// r(s) = 1 at `state`, 0 elsewhere.
RewardTable indicator_reward(std::size_t n_states, std::size_t state);

constexpr std::size_t kTabularStates = 16;
constexpr std::size_t kTabularActions = 4;
constexpr std::size_t kTabularGoalState = 0;
constexpr std::size_t kTabularStartState = 1;

/// Transition family used for the 16-state tabular task: deterministic random
/// successors, redrawn until decomposable and fully reachable from the start.
TransitionSpec tabular_transition_spec();

/// The 16-state, 4-action task: reward 1 for acting in state 0, start state 1.
TabularMdp tabular_task_mdp(std::uint64_t seed, double discount = 0.9,
                            std::size_t horizon = 20);

/// T' = (1 - weight) T + weight * I on every (s, a).
TabularMdp add_self_transitions(const TabularMdp& mdp, double weight);

struct DecompositionReport {
  bool is_decomposable = false;
  /// Sorted classes of the transitive closure of the 1-step-linked relation;
  /// each class sorted ascending.
  std::vector<std::vector<std::size_t>> linked_classes;
};

/// Probability threshold below which a transition counts as impossible.
constexpr double kPositiveProbability = 1e-12;

DecompositionReport decomposability_check(const TabularMdp& mdp);

/// States reachable (in any number of steps) from the initial distribution.
std::vector<bool> reachable_states(const TabularMdp& mdp);

enum class CounterexampleVariant { original, modified };

/// State and action labels of the three-state counterexample.
namespace counterexample {
constexpr std::size_t S = 0;
constexpr std::size_t A = 1;
constexpr std::size_t B = 2;
constexpr std::size_t action_a = 0;
constexpr std::size_t action_b = 1;
/// From A and B both actions return to S.
constexpr std::size_t action_s = 0;
}  // namespace counterexample

/// Three-state deterministic MDP starting in S. In the original dynamics a
/// leads S->A and b leads S->B; the modified dynamics swap them. Leaving A
/// pays +1 and leaving B pays -1 (kind = transition).
TabularMdp counterexample_mdp(CounterexampleVariant variant, double discount = 0.9,
                              std::size_t horizon = 20);

/// The action-dependent reward r'(S,a)=+1, r'(S,b)=-1, r'(A,.)=r'(B,.)=0.
RewardTable counterexample_shaped_reward();

/// Potential (0, 1, -1) over (S, A, B) that turns the ground truth into r'
/// on realized transitions when gamma = 1.
std::vector<double> counterexample_potential();

std::string mdp_to_json(const TabularMdp& mdp, int indent = -1);
TabularMdp mdp_from_json(std::string_view text);

std::string reward_to_json(const RewardTable& reward, int indent = -1);
RewardTable reward_from_json(std::string_view text);

}  // namespace irl
