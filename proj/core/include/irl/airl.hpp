#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "irl/mdp.hpp"
#include "irl/soft_rl.hpp"

namespace irl {

enum class LearnerVariant { airl_state_only, airl_state_action, gan_gcl_trajectory };
enum class DataMode { exact_occupancy, sampled };

std::string_view to_string(LearnerVariant variant);
LearnerVariant learner_variant_from_string(std::string_view name);
std::string_view to_string(DataMode mode);
DataMode data_mode_from_string(std::string_view name);

/// Learned tables of the AIRL discriminator
///   f(s,a,s') = g(s[,a]) + gamma * h(s') - h(s).
struct DiscriminatorParams {
  RewardTable g;          ///< reward approximator, state_only or state_action
  std::vector<double> h;  ///< shaping term
  double discount = 0.9;

  static DiscriminatorParams zeros(LearnerVariant variant, std::size_t n_states,
                                   std::size_t n_actions, double discount);
  std::size_t n_states() const { return h.size(); }
  bool all_finite() const;
};

struct LearnerConfig {
  LearnerVariant variant = LearnerVariant::airl_state_only;
  DataMode mode = DataMode::exact_occupancy;
  std::size_t iterations = 4000;
  std::size_t disc_steps_per_iter = 20;
  double disc_step_size = 0.3;
  /// Past iterations whose policy samples are pooled as negatives (sampled mode).
  std::size_t replay_window = 20;
  std::size_t n_policy_trajectories = 50;
  /// Demonstrations drawn when expert data is sampled.
  std::size_t n_expert_trajectories = 100;
  double entropy_weight = 1.0;
  double vi_tolerance = 1e-8;
  std::uint64_t seed = 0;
};

/// Throws std::invalid_argument on a non-positive step size, entropy weight or
/// tolerance, or a zero replay window.
void validate_config(const LearnerConfig& config);

struct IterationRecord {
  std::size_t iteration = 0;
  double disc_loss = 0.0;
  /// Ground-truth return of the policy produced by this iteration (no entropy).
  double true_return = 0.0;
  /// Mean-centered sup-norm distance of the learned reward to the ground truth.
  double reward_error = 0.0;
  /// Sup-norm change of the reward table during this iteration.
  double g_delta = 0.0;
  /// Soft value iteration sweeps used so far, across all policy steps.
  std::size_t cumulative_vi_sweeps = 0;
};

struct TrainingHistory {
  std::vector<IterationRecord> records;

  /// Columns: iter,disc_loss,true_return,reward_error,g_delta.
  std::string to_csv() const;
  std::string to_json(int indent = -1) const;
};

/// Raised when a learned parameter becomes non-finite.
class TrainingDivergence : public std::runtime_error {
 public:
  explicit TrainingDivergence(std::size_t iteration);
  std::size_t iteration() const { return iteration_; }

 private:
  std::size_t iteration_;
};

// --- discriminator ----------------------------------------------------------

double f_value(const DiscriminatorParams& params, std::size_t s, std::size_t a,
               std::size_t next);

/// f(s,a,s') over every transition (kind = transition).
RewardTable f_table(const DiscriminatorParams& params, std::size_t n_actions);

/// log D - log(1 - D) = f - log pi(a|s).
double discriminator_logit(const DiscriminatorParams& params, const PolicyTable& policy,
                           std::size_t s, std::size_t a, std::size_t next);

/// D = exp(f) / (exp(f) + pi(a|s)), evaluated in log space.
double discriminator_prob(const DiscriminatorParams& params, const PolicyTable& policy,
                          std::size_t s, std::size_t a, std::size_t next);

/// -E_expert[log D] - E_negatives[log(1 - D)] under the given weights.
double discriminator_loss(const DiscriminatorParams& params, const PolicyTable& policy,
                          const OccupancyMeasure& expert, const OccupancyMeasure& negatives);
double discriminator_loss(const DiscriminatorParams& params, const PolicyTable& policy,
                          const TransitionBatch& expert, const TransitionBatch& negatives);

/// Gradient of `discriminator_loss`, laid out like the parameters.
struct DiscriminatorGrad {
  std::vector<double> g;
  std::vector<double> h;
};

DiscriminatorGrad discriminator_grad(const DiscriminatorParams& params,
                                     const PolicyTable& policy, const OccupancyMeasure& expert,
                                     const OccupancyMeasure& negatives);
DiscriminatorGrad discriminator_grad(const DiscriminatorParams& params,
                                     const PolicyTable& policy, const TransitionBatch& expert,
                                     const TransitionBatch& negatives);

/// log D - log(1 - D) for every transition; identical to f - log pi.
RewardTable extract_reward(const DiscriminatorParams& params, const PolicyTable& policy);

// --- training ---------------------------------------------------------------

/// Expert data: an exact occupancy measure or sampled demonstrations.
using ExpertData = std::variant<OccupancyMeasure, std::vector<Trajectory>>;

/// Soft-optimal policy for the MDP's ground-truth reward.
PolicyTable expert_policy(const TabularMdp& mdp, double entropy_weight = 1.0);

/// Exact expert occupancy in exact mode, `n_expert_trajectories` samples otherwise.
ExpertData make_expert_data(const TabularMdp& mdp, const LearnerConfig& config);

struct AirlResult {
  DiscriminatorParams params;
  PolicyTable policy;
  TrainingHistory history;
};

/// Alternates discriminator gradient steps with a soft-value-iteration policy
/// step. The airl_state_action variant keeps h at zero (unrestricted f(s,a)).
AirlResult airl_train(const TabularMdp& mdp, const ExpertData& demos,
                      const LearnerConfig& config);

// --- trajectory-level baseline ---------------------------------------------

/// Per-step score f_step(s,a); a trajectory scores sum_t f_step(s_t, a_t).
struct TrajectoryScorer {
  StateActionTable f_step;
};

double trajectory_score(const TrajectoryScorer& scorer, const Trajectory& tau);

/// log pi(tau) = log rho0(s_0) + sum_t [log pi(a_t|s_t) + log T(s_{t+1}|s_t,a_t)].
double trajectory_log_prob(const TabularMdp& mdp, const PolicyTable& policy,
                           const Trajectory& tau);

/// D(tau) = exp(F) / (exp(F) + pi(tau)), where the model log-density F carries
/// the same rho0 and dynamics factors as pi(tau).
double trajectory_discriminator(const TabularMdp& mdp, const TrajectoryScorer& scorer,
                                const PolicyTable& policy, const Trajectory& tau);

double trajectory_loss(const TabularMdp& mdp, const TrajectoryScorer& scorer,
                       const PolicyTable& policy, const std::vector<Trajectory>& expert,
                       const std::vector<Trajectory>& negatives);

StateActionTable trajectory_loss_grad(const TabularMdp& mdp, const TrajectoryScorer& scorer,
                                      const PolicyTable& policy,
                                      const std::vector<Trajectory>& expert,
                                      const std::vector<Trajectory>& negatives);

struct GanGclResult {
  TrajectoryScorer scorer;
  PolicyTable policy;
  TrainingHistory history;
};

/// Sampled mode only; demos must be whole trajectories.
GanGclResult gan_gcl_train(const TabularMdp& mdp, const std::vector<Trajectory>& demos,
                           const LearnerConfig& config);

std::string params_to_json(const DiscriminatorParams& params, int indent = -1);
DiscriminatorParams params_from_json(std::string_view text);

}  // namespace irl
