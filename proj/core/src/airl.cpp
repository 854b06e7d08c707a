#include "irl/airl.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "irl/format.hpp"
#include "irl/random.hpp"
#include "irl/shaping.hpp"
#include "json_util.hpp"

namespace irl {

namespace {

/// log(1 + exp(x)) without overflow.
double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

std::size_t g_index(const DiscriminatorParams& params, std::size_t s, std::size_t a) {
  return params.g.kind() == RewardKind::state_only ? s : s * params.g.n_actions() + a;
}

void check_shapes(const DiscriminatorParams& params, const PolicyTable& policy,
                  const OccupancyMeasure& expert, const OccupancyMeasure& negatives) {
  const std::size_t n = params.n_states();
  if (policy.n_states() != n || expert.n_states() != n || negatives.n_states() != n ||
      expert.n_actions() != policy.n_actions() || negatives.n_actions() != policy.n_actions()) {
    throw std::invalid_argument("discriminator: shape mismatch between params, policy and data");
  }
  if (params.g.kind() == RewardKind::state_action &&
      params.g.n_actions() != policy.n_actions()) {
    throw std::invalid_argument("discriminator: g has the wrong action count");
  }
}

RewardTable g_as_reward(const DiscriminatorParams& params) { return params.g; }

IterationRecord make_record(std::size_t iteration, double loss, const TabularMdp& mdp,
                            const PolicyTable& policy, const RewardTable& learned,
                            double g_delta, std::size_t sweeps) {
  IterationRecord rec;
  rec.iteration = iteration;
  rec.disc_loss = loss;
  rec.true_return = evaluate_return(mdp, policy, mdp.reward, false);
  rec.reward_error = centered_distance(learned, mdp.reward, mdp.n_actions);
  rec.g_delta = g_delta;
  rec.cumulative_vi_sweeps = sweeps;
  return rec;
}

void require_nonempty(const ExpertData& demos) {
  if (const auto* occ = std::get_if<OccupancyMeasure>(&demos)) {
    if (!(occ->total() > 0.0)) throw std::invalid_argument("expert occupancy has no mass");
    return;
  }
  const auto& trajectories = std::get<std::vector<Trajectory>>(demos);
  if (trajectories.empty() || flatten(trajectories).empty()) {
    throw std::invalid_argument("expert demonstrations are empty");
  }
}

OccupancyMeasure expert_weights(const ExpertData& demos, std::size_t n_states,
                                std::size_t n_actions) {
  if (const auto* occ = std::get_if<OccupancyMeasure>(&demos)) {
    if (occ->n_states() != n_states || occ->n_actions() != n_actions) {
      throw std::invalid_argument("expert occupancy shape does not match the MDP");
    }
    return *occ;
  }
  return empirical_occupancy(flatten(std::get<std::vector<Trajectory>>(demos)), n_states,
                             n_actions);
}

/// Pool of the most recent `window` sample sets.
template <typename T>
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t window) : window_(window) {}
  void push(std::vector<T> items) {
    sets_.push_back(std::move(items));
    while (sets_.size() > window_) sets_.pop_front();
  }
  std::vector<T> pooled() const {
    std::vector<T> out;
    for (const auto& set : sets_) out.insert(out.end(), set.begin(), set.end());
    return out;
  }

 private:
  std::size_t window_;
  std::deque<std::vector<T>> sets_;
};

SoftViOptions policy_step_options(const LearnerConfig& config, std::vector<double> warm) {
  SoftViOptions opts;
  opts.tolerance = config.vi_tolerance;
  opts.entropy_weight = config.entropy_weight;
  opts.initial_values = std::move(warm);
  return opts;
}

}  // namespace

std::string_view to_string(LearnerVariant variant) {
  switch (variant) {
    case LearnerVariant::airl_state_only:
      return "airl_state_only";
    case LearnerVariant::airl_state_action:
      return "airl_state_action";
    case LearnerVariant::gan_gcl_trajectory:
      return "gan_gcl_trajectory";
  }
  return "unknown";
}

LearnerVariant learner_variant_from_string(std::string_view name) {
  if (name == "airl_state_only") return LearnerVariant::airl_state_only;
  if (name == "airl_state_action") return LearnerVariant::airl_state_action;
  if (name == "gan_gcl_trajectory") return LearnerVariant::gan_gcl_trajectory;
  throw std::invalid_argument("unknown learner variant '" + std::string(name) + "'");
}

std::string_view to_string(DataMode mode) {
  return mode == DataMode::exact_occupancy ? "exact_occupancy" : "sampled";
}

DataMode data_mode_from_string(std::string_view name) {
  if (name == "exact_occupancy") return DataMode::exact_occupancy;
  if (name == "sampled") return DataMode::sampled;
  throw std::invalid_argument("unknown data mode '" + std::string(name) + "'");
}

DiscriminatorParams DiscriminatorParams::zeros(LearnerVariant variant, std::size_t n_states,
                                               std::size_t n_actions, double discount) {
  const RewardKind kind = variant == LearnerVariant::airl_state_only ? RewardKind::state_only
                                                                     : RewardKind::state_action;
  return {RewardTable::zeros(kind, n_states, n_actions), std::vector<double>(n_states, 0.0),
          discount};
}

bool DiscriminatorParams::all_finite() const {
  const auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(g.values().begin(), g.values().end(), finite) &&
         std::all_of(h.begin(), h.end(), finite);
}

void validate_config(const LearnerConfig& config) {
  if (!(config.disc_step_size > 0.0)) throw std::invalid_argument("disc_step_size must be > 0");
  if (config.replay_window == 0) throw std::invalid_argument("replay_window must be >= 1");
  if (!(config.entropy_weight > 0.0)) throw std::invalid_argument("entropy_weight must be > 0");
  if (!(config.vi_tolerance > 0.0)) throw std::invalid_argument("vi_tolerance must be > 0");
  if (config.mode == DataMode::sampled && config.n_policy_trajectories == 0) {
    throw std::invalid_argument("sampled mode needs n_policy_trajectories >= 1");
  }
}

std::string TrainingHistory::to_csv() const {
  std::string out = "iter,disc_loss,true_return,reward_error,g_delta\n";
  for (const auto& r : records) {
    out += std::to_string(r.iteration) + ',' + format_float(r.disc_loss) + ',' +
           format_float(r.true_return) + ',' + format_float(r.reward_error) + ',' +
           format_float(r.g_delta) + '\n';
  }
  return out;
}

std::string TrainingHistory::to_json(int indent) const {
  detail::Json rows = detail::Json::array();
  for (const auto& r : records) {
    rows.push_back({{"iter", r.iteration},
                    {"disc_loss", r.disc_loss},
                    {"true_return", r.true_return},
                    {"reward_error", r.reward_error},
                    {"g_delta", r.g_delta},
                    {"cumulative_vi_sweeps", r.cumulative_vi_sweeps}});
  }
  return detail::Json{{"records", std::move(rows)}}.dump(indent);
}

TrainingDivergence::TrainingDivergence(std::size_t iteration)
    : std::runtime_error("training diverged at iteration " + std::to_string(iteration)),
      iteration_(iteration) {}

// ---------------------------------------------------------------------------
// Discriminator

double f_value(const DiscriminatorParams& params, std::size_t s, std::size_t a,
               std::size_t next) {
  const double g = params.g.kind() == RewardKind::state_only ? params.g.at(s) : params.g.at(s, a);
  return g + params.discount * params.h.at(next) - params.h.at(s);
}

RewardTable f_table(const DiscriminatorParams& params, std::size_t n_actions) {
  const std::size_t n = params.n_states();
  RewardTable out = RewardTable::zeros(RewardKind::transition, n, n_actions);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < n_actions; ++a) {
      for (std::size_t next = 0; next < n; ++next) {
        out.mutable_at(s, a, next) = f_value(params, s, a, next);
      }
    }
  }
  return out;
}

double discriminator_logit(const DiscriminatorParams& params, const PolicyTable& policy,
                           std::size_t s, std::size_t a, std::size_t next) {
  return f_value(params, s, a, next) - std::log(policy(s, a));
}

double discriminator_prob(const DiscriminatorParams& params, const PolicyTable& policy,
                          std::size_t s, std::size_t a, std::size_t next) {
  return sigmoid(discriminator_logit(params, policy, s, a, next));
}

double discriminator_loss(const DiscriminatorParams& params, const PolicyTable& policy,
                          const OccupancyMeasure& expert, const OccupancyMeasure& negatives) {
  check_shapes(params, policy, expert, negatives);
  const std::size_t n = params.n_states();
  double loss = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < policy.n_actions(); ++a) {
      const auto pe = expert.rho.row(s, a);
      const auto pn = negatives.rho.row(s, a);
      for (std::size_t next = 0; next < n; ++next) {
        if (pe[next] == 0.0 && pn[next] == 0.0) continue;
        const double x = discriminator_logit(params, policy, s, a, next);
        // -log D = softplus(-x), -log(1 - D) = softplus(x)
        loss += pe[next] * softplus(-x) + pn[next] * softplus(x);
      }
    }
  }
  return loss;
}

double discriminator_loss(const DiscriminatorParams& params, const PolicyTable& policy,
                          const TransitionBatch& expert, const TransitionBatch& negatives) {
  const std::size_t n = params.n_states();
  return discriminator_loss(params, policy, empirical_occupancy(expert, n, policy.n_actions()),
                            empirical_occupancy(negatives, n, policy.n_actions()));
}

DiscriminatorGrad discriminator_grad(const DiscriminatorParams& params,
                                     const PolicyTable& policy, const OccupancyMeasure& expert,
                                     const OccupancyMeasure& negatives) {
  check_shapes(params, policy, expert, negatives);
  const std::size_t n = params.n_states();
  DiscriminatorGrad grad{std::vector<double>(params.g.values().size(), 0.0),
                         std::vector<double>(n, 0.0)};
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < policy.n_actions(); ++a) {
      const auto pe = expert.rho.row(s, a);
      const auto pn = negatives.rho.row(s, a);
      for (std::size_t next = 0; next < n; ++next) {
        if (pe[next] == 0.0 && pn[next] == 0.0) continue;
        const double d = discriminator_prob(params, policy, s, a, next);
        // dL/df at this transition; df/dg = 1, df/dh(s') = gamma, df/dh(s) = -1.
        const double e = pn[next] * d - pe[next] * (1.0 - d);
        grad.g[g_index(params, s, a)] += e;
        grad.h[next] += params.discount * e;
        grad.h[s] -= e;
      }
    }
  }
  return grad;
}

DiscriminatorGrad discriminator_grad(const DiscriminatorParams& params,
                                     const PolicyTable& policy, const TransitionBatch& expert,
                                     const TransitionBatch& negatives) {
  const std::size_t n = params.n_states();
  return discriminator_grad(params, policy, empirical_occupancy(expert, n, policy.n_actions()),
                            empirical_occupancy(negatives, n, policy.n_actions()));
}

RewardTable extract_reward(const DiscriminatorParams& params, const PolicyTable& policy) {
  const std::size_t n = params.n_states();
  RewardTable out = RewardTable::zeros(RewardKind::transition, n, policy.n_actions());
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t a = 0; a < policy.n_actions(); ++a) {
      for (std::size_t next = 0; next < n; ++next) {
        const double x = discriminator_logit(params, policy, s, a, next);
        // log D - log(1 - D) = -softplus(-x) + softplus(x) = x
        out.mutable_at(s, a, next) = softplus(x) - softplus(-x);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Training

PolicyTable expert_policy(const TabularMdp& mdp, double entropy_weight) {
  SoftViOptions opts;
  opts.entropy_weight = entropy_weight;
  return soft_value_iteration(mdp, mdp.reward, opts).policy;
}

ExpertData make_expert_data(const TabularMdp& mdp, const LearnerConfig& config) {
  const PolicyTable expert = expert_policy(mdp, config.entropy_weight);
  if (config.mode == DataMode::exact_occupancy) return occupancy(mdp, expert);
  return sample_trajectories(mdp, expert, config.n_expert_trajectories,
                             derive_seed(config.seed, 0xE7E7));
}

AirlResult airl_train(const TabularMdp& mdp, const ExpertData& demos,
                      const LearnerConfig& config) {
  require_valid(mdp);
  validate_config(config);
  require_nonempty(demos);
  if (config.variant == LearnerVariant::gan_gcl_trajectory) {
    throw std::invalid_argument("airl_train: use gan_gcl_train for the trajectory variant");
  }

  const std::size_t n = mdp.n_states;
  const std::size_t na = mdp.n_actions;
  const bool train_shaping = config.variant == LearnerVariant::airl_state_only;
  const OccupancyMeasure expert = expert_weights(demos, n, na);

  AirlResult result{DiscriminatorParams::zeros(config.variant, n, na, mdp.discount),
                    uniform_policy(n, na), {}};
  auto& params = result.params;
  auto& policy = result.policy;

  ReplayBuffer<Transition> replay(config.replay_window);
  std::vector<double> warm_values;
  std::size_t sweeps = 0;

  for (std::size_t it = 0; it < config.iterations; ++it) {
    OccupancyMeasure negatives;
    if (config.mode == DataMode::exact_occupancy) {
      negatives = occupancy(mdp, policy);
    } else {
      replay.push(flatten(sample_trajectories(mdp, policy, config.n_policy_trajectories,
                                              derive_seed(config.seed, it))));
      negatives = empirical_occupancy(replay.pooled(), n, na);
    }

    const RewardTable g_before = params.g;
    for (std::size_t k = 0; k < config.disc_steps_per_iter; ++k) {
      const auto grad = discriminator_grad(params, policy, expert, negatives);
      auto g = params.g.values();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] -= config.disc_step_size * grad.g[i];
      if (train_shaping) {
        for (std::size_t s = 0; s < n; ++s) params.h[s] -= config.disc_step_size * grad.h[s];
      }
    }
    if (!params.all_finite()) throw TrainingDivergence(it);
    const double loss = discriminator_loss(params, policy, expert, negatives);

    // Policy step. The reward log D - log(1-D) = f - log pi carries its own
    // entropy bonus; the soft solver supplies that bonus, so it is run on f.
    const RewardTable step_reward = f_table(params, na);
    const auto solution =
        soft_value_iteration(mdp, step_reward, policy_step_options(config, warm_values));
    sweeps += solution.iterations_used;
    warm_values = solution.v;
    policy = solution.policy;

    result.history.records.push_back(make_record(
        it, loss, mdp, policy, g_as_reward(params),
        max_abs_diff(g_before.values(), params.g.values()), sweeps));
  }
  return result;
}

// ---------------------------------------------------------------------------
// Trajectory-level discriminator

double trajectory_score(const TrajectoryScorer& scorer, const Trajectory& tau) {
  double total = 0.0;
  for (const auto& step : tau.steps) total += scorer.f_step(step.state, step.action);
  return total;
}

namespace {

double log_or_neg_inf(double p) {
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

/// log rho0(s_0) + sum_t log T(s_{t+1} | s_t, a_t).
double dynamics_log_prob(const TabularMdp& mdp, const Trajectory& tau) {
  if (tau.steps.empty()) return 0.0;
  double total = log_or_neg_inf(mdp.initial_dist.at(tau.steps.front().state));
  for (std::size_t t = 0; t < tau.size(); ++t) {
    const auto tr = tau.transition(t);
    total += log_or_neg_inf(mdp.transition(tr.state, tr.action, tr.next_state));
  }
  return total;
}

double policy_log_prob(const PolicyTable& policy, const Trajectory& tau) {
  double total = 0.0;
  for (const auto& step : tau.steps) total += std::log(policy(step.state, step.action));
  return total;
}

double trajectory_logit(const TabularMdp& mdp, const TrajectoryScorer& scorer,
                        const PolicyTable& policy, const Trajectory& tau) {
  // The rho0 and dynamics factors appear in both the model density and
  // pi(tau); they cancel exactly and are dropped here.
  (void)mdp;
  return trajectory_score(scorer, tau) - policy_log_prob(policy, tau);
}

void require_trajectory_sets(const std::vector<Trajectory>& expert,
                             const std::vector<Trajectory>& negatives) {
  if (expert.empty() || negatives.empty()) {
    throw std::invalid_argument("trajectory discriminator needs nonempty expert and negatives");
  }
}

}  // namespace

double trajectory_log_prob(const TabularMdp& mdp, const PolicyTable& policy,
                           const Trajectory& tau) {
  return dynamics_log_prob(mdp, tau) + policy_log_prob(policy, tau);
}

double trajectory_discriminator(const TabularMdp& mdp, const TrajectoryScorer& scorer,
                                const PolicyTable& policy, const Trajectory& tau) {
  return sigmoid(trajectory_logit(mdp, scorer, policy, tau));
}

double trajectory_loss(const TabularMdp& mdp, const TrajectoryScorer& scorer,
                       const PolicyTable& policy, const std::vector<Trajectory>& expert,
                       const std::vector<Trajectory>& negatives) {
  require_trajectory_sets(expert, negatives);
  double pos = 0.0;
  for (const auto& tau : expert) pos += softplus(-trajectory_logit(mdp, scorer, policy, tau));
  double neg = 0.0;
  for (const auto& tau : negatives) neg += softplus(trajectory_logit(mdp, scorer, policy, tau));
  return pos / static_cast<double>(expert.size()) + neg / static_cast<double>(negatives.size());
}

StateActionTable trajectory_loss_grad(const TabularMdp& mdp, const TrajectoryScorer& scorer,
                                      const PolicyTable& policy,
                                      const std::vector<Trajectory>& expert,
                                      const std::vector<Trajectory>& negatives) {
  require_trajectory_sets(expert, negatives);
  StateActionTable grad(scorer.f_step.n_states(), scorer.f_step.n_actions());
  const auto accumulate = [&](const std::vector<Trajectory>& set, bool is_expert) {
    const double w = 1.0 / static_cast<double>(set.size());
    for (const auto& tau : set) {
      const double d = sigmoid(trajectory_logit(mdp, scorer, policy, tau));
      const double e = w * (is_expert ? d - 1.0 : d);
      for (const auto& step : tau.steps) grad(step.state, step.action) += e;
    }
  };
  accumulate(expert, true);
  accumulate(negatives, false);
  return grad;
}

GanGclResult gan_gcl_train(const TabularMdp& mdp, const std::vector<Trajectory>& demos,
                           const LearnerConfig& config) {
  require_valid(mdp);
  validate_config(config);
  if (config.mode != DataMode::sampled) {
    throw std::invalid_argument("gan_gcl_train runs in sampled mode only");
  }
  if (demos.empty()) throw std::invalid_argument("expert demonstrations are empty");

  const std::size_t n = mdp.n_states;
  const std::size_t na = mdp.n_actions;
  GanGclResult result{{StateActionTable(n, na)}, uniform_policy(n, na), {}};
  auto& scorer = result.scorer;
  auto& policy = result.policy;

  ReplayBuffer<Trajectory> replay(config.replay_window);
  std::vector<double> warm_values;
  std::size_t sweeps = 0;

  for (std::size_t it = 0; it < config.iterations; ++it) {
    replay.push(sample_trajectories(mdp, policy, config.n_policy_trajectories,
                                    derive_seed(config.seed, it)));
    const auto negatives = replay.pooled();

    const StateActionTable before = scorer.f_step;
    for (std::size_t k = 0; k < config.disc_steps_per_iter; ++k) {
      const auto grad = trajectory_loss_grad(mdp, scorer, policy, demos, negatives);
      auto f = scorer.f_step.values();
      const auto gv = grad.values();
      for (std::size_t i = 0; i < f.size(); ++i) f[i] -= config.disc_step_size * gv[i];
    }
    const auto fv = scorer.f_step.values();
    if (!std::all_of(fv.begin(), fv.end(), [](double v) { return std::isfinite(v); })) {
      throw TrainingDivergence(it);
    }
    const double loss = trajectory_loss(mdp, scorer, policy, demos, negatives);

    const RewardTable step_reward = RewardTable::state_action(
        n, na, std::vector<double>(fv.begin(), fv.end()));
    const auto solution =
        soft_value_iteration(mdp, step_reward, policy_step_options(config, warm_values));
    sweeps += solution.iterations_used;
    warm_values = solution.v;
    policy = solution.policy;

    result.history.records.push_back(make_record(
        it, loss, mdp, policy, step_reward, max_abs_diff(before.values(), fv), sweeps));
  }
  return result;
}

// ---------------------------------------------------------------------------
// JSON

std::string params_to_json(const DiscriminatorParams& params, int indent) {
  detail::Json j{{"g", detail::to_json(params.g)},
                 {"h", params.h},
                 {"discount", params.discount}};
  return j.dump(indent);
}

DiscriminatorParams params_from_json(std::string_view text) {
  const auto j = detail::Json::parse(text);
  detail::require_known_keys(j, {"g", "h", "discount"}, "discriminator parameters");
  DiscriminatorParams params;
  params.g = detail::reward_from_json(j.at("g"));
  params.h = j.at("h").get<std::vector<double>>();
  params.discount = j.at("discount").get<double>();
  if (params.g.n_states() != params.h.size()) {
    throw std::invalid_argument("discriminator parameters: g and h disagree on n_states");
  }
  return params;
}

}  // namespace irl
