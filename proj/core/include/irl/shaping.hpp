#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "irl/mdp.hpp"
#include "irl/soft_rl.hpp"

namespace irl {

/// State potential Phi(s); all entries finite.
struct PotentialFn {
  std::vector<double> phi;
};

/// r(s,a,s') + gamma * Phi(s') - Phi(s), with lower-arity rewards broadcast.
/// `n_actions` fixes the action axis when `reward` is state-only.
RewardTable shape_reward(const RewardTable& reward, const PotentialFn& potential,
                         double discount, std::size_t n_actions);

/// A(s,a) = Q(s,a) - V(s), which equals w * log pi(a|s).
StateActionTable advantage(const SoftSolution& solution);

/// Subtracts the arithmetic mean over all entries.
RewardTable mean_center(const RewardTable& reward);

/// Sup-norm distance between two rewards after mean-centering, both expressed
/// at the higher of their two arities.
double centered_distance(const RewardTable& a, const RewardTable& b, std::size_t n_actions);

/// (s, s') pairs reachable in one step under some action.
std::vector<std::pair<std::size_t, std::size_t>> one_step_support(const TabularMdp& mdp);

enum class DecomposeStatus {
  ok,
  /// Some support entry disagrees with the propagated assignment.
  inconsistent,
  /// The support leaves more than one free constant (or an unconstrained
  /// state), so f and g are not determined up to a single shared offset.
  underdetermined,
};

struct DecomposeResult {
  DecomposeStatus status = DecomposeStatus::underdetermined;
  std::vector<double> f;  ///< current-state part, gauge f(0) = 0
  std::vector<double> g;  ///< next-state part
  bool feasible() const { return status == DecomposeStatus::ok; }
};

/// Recovers f and g from table(s, s') = f(s) + g(s') on the given support,
/// up to (f + c, g - c). Consistency slack is `tolerance`.
DecomposeResult decompose_sum(const StateActionTable& table,
                              const std::vector<std::pair<std::size_t, std::size_t>>& support,
                              double tolerance = 1e-8);

}  // namespace irl
