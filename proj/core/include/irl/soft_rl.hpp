#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "irl/mdp.hpp"
#include "irl/tables.hpp"

namespace irl {

/// Fixed point of the entropy-regularized Bellman operator.
///
/// Invariants: v(s) = w * log sum_a exp(q(s,a) / w) and
/// policy(s,a) = exp((q(s,a) - v(s)) / w), where w is `entropy_weight`.
struct SoftSolution {
  StateActionTable q;
  std::vector<double> v;
  PolicyTable policy;
  std::size_t iterations_used = 0;
  /// Sup-norm change of V on the last sweep.
  double residual = 0.0;
  /// False when max_iterations was hit before reaching the tolerance.
  bool converged = false;
  double entropy_weight = 1.0;
};

struct SoftViOptions {
  double tolerance = 1e-8;
  std::size_t max_iterations = 100000;
  double entropy_weight = 1.0;
  /// Warm start for V; empty means V = 0.
  std::vector<double> initial_values;
  /// Called after every sweep with its 1-based index and Q-table.
  std::function<void(std::size_t sweep, const StateActionTable& q)> on_sweep;
};

/// r(s,a) averaged over next states under T; transition-arity rewards are
/// collapsed this way before every Bellman backup.
StateActionTable expected_reward(const TabularMdp& mdp, const RewardTable& reward);

/// Soft value iteration on `reward` under the MDP's dynamics and discount.
/// Throws std::invalid_argument on an invalid MDP, a non-finite reward or
/// non-positive tolerance/entropy weight.
SoftSolution soft_value_iteration(const TabularMdp& mdp, const RewardTable& reward,
                                  const SoftViOptions& options = {});

PolicyTable softmax_policy(const StateActionTable& q, double entropy_weight = 1.0);
PolicyTable uniform_policy(std::size_t n_states, std::size_t n_actions);

/// Throws std::invalid_argument unless every row is a distribution (1e-9).
void require_policy(const PolicyTable& policy, std::size_t n_states, std::size_t n_actions);

/// Shannon entropy (nats) of one action distribution.
double entropy(std::span<const double> probabilities);

struct Transition {
  std::size_t state = 0;
  std::size_t action = 0;
  std::size_t next_state = 0;
  bool operator==(const Transition&) const = default;
};

using TransitionBatch = std::vector<Transition>;

struct Step {
  std::size_t state = 0;
  std::size_t action = 0;
  bool operator==(const Step&) const = default;
};

/// One episode of length `horizon`: the successor of step t is the state of
/// step t+1, and the successor of the last step is `final_state`.
struct Trajectory {
  std::vector<Step> steps;
  std::size_t final_state = 0;

  std::size_t size() const { return steps.size(); }
  Transition transition(std::size_t t) const;
  bool operator==(const Trajectory&) const = default;
};

/// n episodes from rho0 under `policy`; deterministic for a fixed seed.
std::vector<Trajectory> sample_trajectories(const TabularMdp& mdp, const PolicyTable& policy,
                                            std::size_t n, std::uint64_t seed);

TransitionBatch flatten(const std::vector<Trajectory>& trajectories);

/// Discounted visitation over (s, a, s'), normalized to total mass 1.
struct OccupancyMeasure {
  TransitionTable rho;

  std::size_t n_states() const { return rho.n_states(); }
  std::size_t n_actions() const { return rho.n_actions(); }
  std::vector<double> state_marginal() const;
  StateActionTable state_action_marginal() const;
  double total() const;
};

/// Unnormalized sum_t gamma^t P(s_t = s, a_t = a, s_{t+1} = s') for t < horizon.
TransitionTable discounted_visitation(const TabularMdp& mdp, const PolicyTable& policy);

OccupancyMeasure occupancy(const TabularMdp& mdp, const PolicyTable& policy);

/// Uniform weights over the transitions of a sample batch.
OccupancyMeasure empirical_occupancy(const TransitionBatch& batch, std::size_t n_states,
                                     std::size_t n_actions);

/// Total-variation distance between two distributions of equal size.
double total_variation(std::span<const double> p, std::span<const double> q);

/// Exact E[sum_{t<H} gamma^t (r_t + w * H(pi(.|s_t)))], entropy term only when
/// requested.
double evaluate_return(const TabularMdp& mdp, const PolicyTable& policy,
                       const RewardTable& reward, bool include_entropy,
                       double entropy_weight = 1.0);

std::string soft_solution_to_json(const SoftSolution& solution, int indent = -1);
std::string occupancy_to_json(const OccupancyMeasure& occupancy, int indent = -1);

}  // namespace irl
