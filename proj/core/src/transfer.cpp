#include "irl/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irl/format.hpp"
#include "irl/random.hpp"
#include "irl/shaping.hpp"
#include "json_util.hpp"

namespace irl {

namespace {

void require_airl_variant(LearnerVariant variant) {
  if (variant == LearnerVariant::gan_gcl_trajectory) {
    throw std::invalid_argument("recovery and transfer need an AIRL variant");
  }
}

double advantage_gap(const TabularMdp& mdp, const DiscriminatorParams& params,
                     const PolicyTable& expert) {
  double worst = 0.0;
  for (std::size_t s = 0; s < mdp.n_states; ++s) {
    for (std::size_t a = 0; a < mdp.n_actions; ++a) {
      const double target = std::log(expert(s, a));
      for (std::size_t next = 0; next < mdp.n_states; ++next) {
        if (mdp.transition(s, a, next) <= kPositiveProbability) continue;
        worst = std::max(worst, std::abs(f_value(params, s, a, next) - target));
      }
    }
  }
  return worst;
}

SoftViOptions solver_options(double entropy_weight, double tolerance) {
  SoftViOptions opts;
  opts.entropy_weight = entropy_weight;
  opts.tolerance = tolerance;
  return opts;
}

detail::Json returns_json(const ReferenceReturns& r) {
  return {{"ground_truth_optimal", r.ground_truth_optimal},
          {"reoptimized_on_learned", r.reoptimized_on_learned},
          {"uniform_random", r.uniform_random}};
}

}  // namespace

RecoveryResult run_recovery(const TabularMdp& mdp, const LearnerConfig& config) {
  require_airl_variant(config.variant);
  const ExpertData demos = make_expert_data(mdp, config);
  RecoveryResult out;
  out.variant = config.variant;
  out.training = airl_train(mdp, demos, config);
  out.recovery_error = centered_distance(out.training.params.g, mdp.reward, mdp.n_actions);
  out.advantage_error =
      advantage_gap(mdp, out.training.params, expert_policy(mdp, config.entropy_weight));
  return out;
}

std::string recovery_to_json(const RecoveryResult& result, int indent) {
  detail::Json j{{"variant", std::string(to_string(result.variant))},
                 {"recovery_error", result.recovery_error},
                 {"advantage_error", result.advantage_error},
                 {"g", detail::to_json(result.training.params.g)},
                 {"h", result.training.params.h}};
  return j.dump(indent);
}

double normalized_score(double value, double uniform, double optimal) {
  const double span = optimal - uniform;
  if (!(std::abs(span) > 1e-12)) {
    throw std::invalid_argument("normalized_score: optimal and uniform returns coincide");
  }
  return (value - uniform) / span;
}

std::vector<CurvePoint> reoptimization_curve(const TabularMdp& mdp, const RewardTable& reward,
                                             double entropy_weight, double tolerance) {
  std::vector<CurvePoint> curve;
  curve.push_back({0, evaluate_return(mdp, uniform_policy(mdp.n_states, mdp.n_actions),
                                      mdp.reward, false)});
  SoftViOptions opts = solver_options(entropy_weight, tolerance);
  opts.on_sweep = [&](std::size_t sweep, const StateActionTable& q) {
    curve.push_back(
        {sweep, evaluate_return(mdp, softmax_policy(q, entropy_weight), mdp.reward, false)});
  };
  soft_value_iteration(mdp, reward, opts);
  return curve;
}

TransferResult run_transfer(const TabularMdp& train, const TabularMdp& test,
                            const LearnerConfig& config) {
  if (train.n_states != test.n_states || train.n_actions != test.n_actions) {
    throw std::invalid_argument("run_transfer: train and test MDPs differ in shape");
  }
  require_valid(test);
  return transfer_from_recovery(run_recovery(train, config), test, config);
}

TransferResult transfer_from_recovery(const RecoveryResult& recovery, const TabularMdp& test,
                                      const LearnerConfig& config) {
  require_valid(test);
  if (recovery.training.params.n_states() != test.n_states) {
    throw std::invalid_argument("transfer: learned reward does not match the test MDP");
  }
  TransferResult out;
  out.variant = recovery.variant;
  out.learned_reward = recovery.training.params.g;
  out.recovery_error = recovery.recovery_error;

  const double w = config.entropy_weight;
  const auto opts = solver_options(w, config.vi_tolerance);
  out.returns.uniform_random =
      evaluate_return(test, uniform_policy(test.n_states, test.n_actions), test.reward, false);
  out.returns.ground_truth_optimal =
      evaluate_return(test, soft_value_iteration(test, test.reward, opts).policy, test.reward,
                      false);
  out.returns.reoptimized_on_learned =
      evaluate_return(test, soft_value_iteration(test, out.learned_reward, opts).policy,
                      test.reward, false);
  out.curve = reoptimization_curve(test, out.learned_reward, w, config.vi_tolerance);

  const auto& r = out.returns;
  out.score = normalized_score(r.reoptimized_on_learned, r.uniform_random, r.ground_truth_optimal);
  const auto truth_curve = reoptimization_curve(test, test.reward, w, config.vi_tolerance);
  out.ground_truth_score =
      normalized_score(truth_curve.back().true_return, r.uniform_random, r.ground_truth_optimal);
  return out;
}

std::string transfer_to_json(const TransferResult& result, int indent) {
  detail::Json curve = detail::Json::array();
  for (const auto& p : result.curve) curve.push_back({p.vi_sweeps, p.true_return});
  detail::Json j{{"train_seed", result.train_seed},
                 {"test_seed", result.test_seed},
                 {"variant", std::string(to_string(result.variant))},
                 {"learned_reward", detail::to_json(result.learned_reward)},
                 {"returns", returns_json(result.returns)},
                 {"curve", std::move(curve)},
                 {"recovery_error", result.recovery_error},
                 {"score", result.score},
                 {"ground_truth_score", result.ground_truth_score}};
  return j.dump(indent);
}

std::string transfer_curve_csv(const std::vector<TransferResult>& results) {
  std::string out = "train_seed,test_seed,variant,vi_sweeps,true_return\n";
  for (const auto& r : results) {
    const std::string prefix = std::to_string(r.train_seed) + ',' + std::to_string(r.test_seed) +
                               ',' + std::string(to_string(r.variant)) + ',';
    for (const auto& p : r.curve) {
      out += prefix + std::to_string(p.vi_sweeps) + ',' + format_float(p.true_return) + '\n';
    }
  }
  return out;
}

std::vector<AggregatePoint> aggregate_curves(const std::vector<TransferResult>& results) {
  std::size_t longest = 0;
  for (const auto& r : results) {
    if (r.curve.empty()) throw std::invalid_argument("aggregate_curves: empty curve");
    longest = std::max(longest, r.curve.back().vi_sweeps);
  }
  std::vector<AggregatePoint> out;
  if (results.empty()) return out;
  std::vector<std::size_t> cursor(results.size(), 0);
  for (std::size_t x = 0; x <= longest; ++x) {
    AggregatePoint point{x, 0.0, std::numeric_limits<double>::infinity(),
                         -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& curve = results[i].curve;
      while (cursor[i] + 1 < curve.size() && curve[cursor[i] + 1].vi_sweeps <= x) ++cursor[i];
      const double v = curve[cursor[i]].true_return;
      point.mean += v;
      point.min = std::min(point.min, v);
      point.max = std::max(point.max, v);
    }
    point.mean /= static_cast<double>(results.size());
    out.push_back(point);
  }
  return out;
}

std::string aggregate_curve_csv(const std::vector<AggregatePoint>& points) {
  std::string out = "vi_sweeps,mean,min,max\n";
  for (const auto& p : points) {
    out += std::to_string(p.vi_sweeps) + ',' + format_float(p.mean) + ',' + format_float(p.min) +
           ',' + format_float(p.max) + '\n';
  }
  return out;
}

double ProbeResult::fraction() const {
  if (agrees.empty()) return 1.0;
  const auto hits = std::count(agrees.begin(), agrees.end(), true);
  return static_cast<double>(hits) / static_cast<double>(agrees.size());
}

std::vector<std::vector<std::size_t>> maximizing_actions(const PolicyTable& policy,
                                                         double tie_band) {
  std::vector<std::vector<std::size_t>> out(policy.n_states());
  for (std::size_t s = 0; s < policy.n_states(); ++s) {
    const auto row = policy.row(s);
    const double best = *std::max_element(row.begin(), row.end());
    for (std::size_t a = 0; a < row.size(); ++a) {
      if (row[a] >= best - tie_band) out[s].push_back(a);
    }
  }
  return out;
}

ProbeResult disentanglement_probe(const TabularMdp& mdp, const RewardTable& reward,
                                  std::size_t n_dynamics, std::uint64_t seed,
                                  const std::vector<TransitionTable>& extra_dynamics,
                                  const TransitionSpec& spec) {
  require_valid(mdp);
  std::vector<TransitionTable> dynamics;
  dynamics.reserve(n_dynamics + extra_dynamics.size());
  for (std::size_t i = 0; i < n_dynamics; ++i) {
    dynamics.push_back(random_transitions(mdp.n_states, mdp.n_actions, spec, derive_seed(seed, i)));
  }
  dynamics.insert(dynamics.end(), extra_dynamics.begin(), extra_dynamics.end());

  ProbeResult out;
  TabularMdp probe = mdp;
  for (const auto& transition : dynamics) {
    probe.transition = transition;
    require_valid(probe);
    const auto truth = maximizing_actions(soft_value_iteration(probe, mdp.reward).policy);
    const auto candidate = maximizing_actions(soft_value_iteration(probe, reward).policy);
    out.agrees.push_back(truth == candidate);
  }
  return out;
}

}  // namespace irl
