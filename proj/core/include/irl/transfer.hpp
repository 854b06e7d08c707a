#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "irl/airl.hpp"
#include "irl/mdp.hpp"

namespace irl {

struct RecoveryResult {
  LearnerVariant variant = LearnerVariant::airl_state_only;
  /// Mean-centered sup-norm distance between learned g and the true reward.
  double recovery_error = 0.0;
  /// sup |f(s,a,s') - log pi_E(a|s)| over transitions the dynamics can produce.
  /// With entropy weight 1 this is |f - A*|.
  double advantage_error = 0.0;
  AirlResult training;
};

/// Trains on exact (or sampled, per config.mode) demos from the soft-optimal
/// expert of `mdp`. `config.variant` must be an AIRL variant.
RecoveryResult run_recovery(const TabularMdp& mdp, const LearnerConfig& config);

std::string recovery_to_json(const RecoveryResult& result, int indent = -1);

struct CurvePoint {
  std::size_t vi_sweeps = 0;
  double true_return = 0.0;
};

struct ReferenceReturns {
  /// Soft-optimal policy for the true reward, evaluated without entropy.
  double ground_truth_optimal = 0.0;
  double reoptimized_on_learned = 0.0;
  double uniform_random = 0.0;
};

struct TransferResult {
  std::uint64_t train_seed = 0;
  std::uint64_t test_seed = 0;
  LearnerVariant variant = LearnerVariant::airl_state_only;
  RewardTable learned_reward;
  ReferenceReturns returns;
  /// True return on the test MDP after each soft VI sweep on the learned
  /// reward. The first point (0 sweeps) is the uniform policy.
  std::vector<CurvePoint> curve;
  double recovery_error = 0.0;
  /// Normalized score of the learned reward on the test MDP.
  double score = 0.0;
  /// Normalized score of re-optimizing the true reward with the same solver.
  double ground_truth_score = 0.0;
};

/// (value - uniform) / (optimal - uniform). Throws std::invalid_argument when
/// optimal and uniform are closer than 1e-12.
double normalized_score(double value, double uniform, double optimal);

/// Learns a reward on `train`, then re-optimizes only g from scratch on `test`.
/// Both MDPs must have the same state and action counts.
TransferResult run_transfer(const TabularMdp& train, const TabularMdp& test,
                            const LearnerConfig& config);

/// Re-optimizes the g learned by `recovery` from scratch on `test`.
TransferResult transfer_from_recovery(const RecoveryResult& recovery, const TabularMdp& test,
                                      const LearnerConfig& config);

/// Soft VI on `reward` over `mdp`, recording the true return after every sweep.
std::vector<CurvePoint> reoptimization_curve(const TabularMdp& mdp, const RewardTable& reward,
                                             double entropy_weight, double tolerance);

std::string transfer_to_json(const TransferResult& result, int indent = -1);

/// Header: train_seed,test_seed,variant,vi_sweeps,true_return
std::string transfer_curve_csv(const std::vector<TransferResult>& results);

struct AggregatePoint {
  std::size_t vi_sweeps = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Per sweep count across runs; a run that has already converged contributes
/// its final return.
std::vector<AggregatePoint> aggregate_curves(const std::vector<TransferResult>& results);

/// Header: vi_sweeps,mean,min,max
std::string aggregate_curve_csv(const std::vector<AggregatePoint>& points);

struct ProbeResult {
  /// One entry per dynamics: sampled ones first, then the extra ones in order.
  std::vector<bool> agrees;
  double fraction() const;
};

/// Actions whose probability is within `tie_band` of the row maximum.
std::vector<std::vector<std::size_t>> maximizing_actions(const PolicyTable& policy,
                                                         double tie_band = 1e-6);

/// For each of `n_dynamics` transition tensors drawn from `spec` (plus every
/// tensor in `extra_dynamics`), compares the maximizing-action sets of the
/// soft-optimal policies for `reward` and for the MDP's true reward.
ProbeResult disentanglement_probe(const TabularMdp& mdp, const RewardTable& reward,
                                  std::size_t n_dynamics, std::uint64_t seed,
                                  const std::vector<TransitionTable>& extra_dynamics = {},
                                  const TransitionSpec& spec = {});

}  // namespace irl
