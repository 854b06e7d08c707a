#include "irl/soft_rl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "irl/random.hpp"
#include "json_util.hpp"

namespace irl {

namespace {

void require_finite(const RewardTable& reward) {
  for (double v : reward.values()) {
    if (!std::isfinite(v)) throw std::invalid_argument("reward has a non-finite entry");
  }
}

void require_matching(const TabularMdp& mdp, const RewardTable& reward) {
  if (reward.n_states() != mdp.n_states ||
      (reward.kind() != RewardKind::state_only && reward.n_actions() != mdp.n_actions)) {
    throw std::invalid_argument("reward shape does not match the MDP");
  }
}

/// Q(s,a) = rbar(s,a) + gamma * sum_s' T(s'|s,a) V(s').
void backup(const TabularMdp& mdp, const StateActionTable& rbar, const std::vector<double>& v,
            StateActionTable& q) {
  for (std::size_t s = 0; s < mdp.n_states; ++s) {
    for (std::size_t a = 0; a < mdp.n_actions; ++a) {
      const auto row = mdp.transition.row(s, a);
      double ev = 0.0;
      for (std::size_t next = 0; next < mdp.n_states; ++next) ev += row[next] * v[next];
      q(s, a) = rbar(s, a) + mdp.discount * ev;
    }
  }
}

/// V(s) = w * lse(Q(s,.) / w).
void soft_max_values(const StateActionTable& q, double weight, std::vector<double>& v,
                     std::vector<double>& scratch) {
  scratch.resize(q.n_actions());
  for (std::size_t s = 0; s < q.n_states(); ++s) {
    const auto row = q.row(s);
    for (std::size_t a = 0; a < row.size(); ++a) scratch[a] = row[a] / weight;
    v[s] = weight * log_sum_exp(scratch);
  }
}

}  // namespace

StateActionTable expected_reward(const TabularMdp& mdp, const RewardTable& reward) {
  require_matching(mdp, reward);
  StateActionTable rbar(mdp.n_states, mdp.n_actions);
  for (std::size_t s = 0; s < mdp.n_states; ++s) {
    for (std::size_t a = 0; a < mdp.n_actions; ++a) {
      if (reward.kind() != RewardKind::transition) {
        rbar(s, a) = reward.value(s, a, 0);
        continue;
      }
      const auto row = mdp.transition.row(s, a);
      double acc = 0.0;
      for (std::size_t next = 0; next < mdp.n_states; ++next) {
        if (row[next] != 0.0) acc += row[next] * reward.value(s, a, next);
      }
      rbar(s, a) = acc;
    }
  }
  return rbar;
}

SoftSolution soft_value_iteration(const TabularMdp& mdp, const RewardTable& reward,
                                  const SoftViOptions& options) {
  require_valid(mdp);
  require_matching(mdp, reward);
  require_finite(reward);
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (!(options.entropy_weight > 0.0)) {
    throw std::invalid_argument("entropy_weight must be positive");
  }
  const double w = options.entropy_weight;
  const StateActionTable rbar = expected_reward(mdp, reward);

  SoftSolution out;
  out.entropy_weight = w;
  out.q = StateActionTable(mdp.n_states, mdp.n_actions);
  out.v = options.initial_values.empty() ? std::vector<double>(mdp.n_states, 0.0)
                                         : options.initial_values;
  if (out.v.size() != mdp.n_states) {
    throw std::invalid_argument("initial_values size does not match n_states");
  }

  std::vector<double> next_v(mdp.n_states);
  std::vector<double> scratch;
  out.residual = std::numeric_limits<double>::infinity();
  while (out.iterations_used < options.max_iterations) {
    backup(mdp, rbar, out.v, out.q);
    soft_max_values(out.q, w, next_v, scratch);
    out.residual = max_abs_diff(next_v, out.v);
    out.v.swap(next_v);
    ++out.iterations_used;
    if (options.on_sweep) options.on_sweep(out.iterations_used, out.q);
    if (out.residual <= options.tolerance) {
      out.converged = true;
      break;
    }
  }

  // One more backup so that q, v and policy are mutually consistent.
  backup(mdp, rbar, out.v, out.q);
  soft_max_values(out.q, w, out.v, scratch);
  out.policy = softmax_policy(out.q, w);
  return out;
}

PolicyTable softmax_policy(const StateActionTable& q, double entropy_weight) {
  PolicyTable policy(q.n_states(), q.n_actions());
  std::vector<double> scaled(q.n_actions());
  for (std::size_t s = 0; s < q.n_states(); ++s) {
    const auto row = q.row(s);
    for (std::size_t a = 0; a < row.size(); ++a) scaled[a] = row[a] / entropy_weight;
    const double norm = log_sum_exp(scaled);
    for (std::size_t a = 0; a < row.size(); ++a) policy(s, a) = std::exp(scaled[a] - norm);
  }
  return policy;
}

PolicyTable uniform_policy(std::size_t n_states, std::size_t n_actions) {
  return PolicyTable(n_states, n_actions, 1.0 / static_cast<double>(n_actions));
}

void require_policy(const PolicyTable& policy, std::size_t n_states, std::size_t n_actions) {
  if (policy.n_states() != n_states || policy.n_actions() != n_actions) {
    throw std::invalid_argument("policy shape does not match the MDP");
  }
  for (std::size_t s = 0; s < n_states; ++s) {
    double sum = 0.0;
    for (double p : policy.row(s)) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("policy row " + std::to_string(s) + " has an invalid entry");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("policy row " + std::to_string(s) + " does not sum to 1");
    }
  }
}

double entropy(std::span<const double> probabilities) {
  double h = 0.0;
  for (double p : probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

Transition Trajectory::transition(std::size_t t) const {
  const std::size_t next = t + 1 < steps.size() ? steps[t + 1].state : final_state;
  return {steps[t].state, steps[t].action, next};
}

std::vector<Trajectory> sample_trajectories(const TabularMdp& mdp, const PolicyTable& policy,
                                            std::size_t n, std::uint64_t seed) {
  require_valid(mdp);
  require_policy(policy, mdp.n_states, mdp.n_actions);
  Rng rng(seed);
  std::vector<Trajectory> out(n);
  for (auto& tau : out) {
    tau.steps.reserve(mdp.horizon);
    std::size_t s = sample_categorical(rng, mdp.initial_dist);
    for (std::size_t t = 0; t < mdp.horizon; ++t) {
      const std::size_t a = sample_categorical(rng, policy.row(s));
      tau.steps.push_back({s, a});
      s = sample_categorical(rng, mdp.transition.row(s, a));
    }
    tau.final_state = s;
  }
  return out;
}

TransitionBatch flatten(const std::vector<Trajectory>& trajectories) {
  TransitionBatch batch;
  for (const auto& tau : trajectories) {
    for (std::size_t t = 0; t < tau.size(); ++t) batch.push_back(tau.transition(t));
  }
  return batch;
}

std::vector<double> OccupancyMeasure::state_marginal() const {
  std::vector<double> out(n_states(), 0.0);
  for (std::size_t s = 0; s < n_states(); ++s) {
    for (std::size_t a = 0; a < n_actions(); ++a) {
      for (double m : rho.row(s, a)) out[s] += m;
    }
  }
  return out;
}

StateActionTable OccupancyMeasure::state_action_marginal() const {
  StateActionTable out(n_states(), n_actions());
  for (std::size_t s = 0; s < n_states(); ++s) {
    for (std::size_t a = 0; a < n_actions(); ++a) {
      for (double m : rho.row(s, a)) out(s, a) += m;
    }
  }
  return out;
}

double OccupancyMeasure::total() const {
  double acc = 0.0;
  for (double m : rho.values()) acc += m;
  return acc;
}

TransitionTable discounted_visitation(const TabularMdp& mdp, const PolicyTable& policy) {
  require_valid(mdp);
  require_policy(policy, mdp.n_states, mdp.n_actions);
  TransitionTable out(mdp.n_states, mdp.n_actions);
  std::vector<double> d = mdp.initial_dist;
  std::vector<double> next_d(mdp.n_states);
  double weight = 1.0;
  for (std::size_t t = 0; t < mdp.horizon; ++t) {
    std::fill(next_d.begin(), next_d.end(), 0.0);
    for (std::size_t s = 0; s < mdp.n_states; ++s) {
      if (d[s] == 0.0) continue;
      for (std::size_t a = 0; a < mdp.n_actions; ++a) {
        const double mass = d[s] * policy(s, a);
        if (mass == 0.0) continue;
        const auto row = mdp.transition.row(s, a);
        auto target = out.row(s, a);
        for (std::size_t next = 0; next < mdp.n_states; ++next) {
          const double m = mass * row[next];
          target[next] += weight * m;
          next_d[next] += m;
        }
      }
    }
    d.swap(next_d);
    weight *= mdp.discount;
  }
  return out;
}

OccupancyMeasure occupancy(const TabularMdp& mdp, const PolicyTable& policy) {
  OccupancyMeasure out{discounted_visitation(mdp, policy)};
  const double total = out.total();
  for (auto& m : out.rho.values()) m /= total;
  return out;
}

OccupancyMeasure empirical_occupancy(const TransitionBatch& batch, std::size_t n_states,
                                     std::size_t n_actions) {
  if (batch.empty()) throw std::invalid_argument("empirical_occupancy: empty batch");
  OccupancyMeasure out{TransitionTable(n_states, n_actions)};
  const double w = 1.0 / static_cast<double>(batch.size());
  for (const auto& tr : batch) {
    if (tr.state >= n_states || tr.action >= n_actions || tr.next_state >= n_states) {
      throw std::invalid_argument("empirical_occupancy: transition index out of range");
    }
    out.rho(tr.state, tr.action, tr.next_state) += w;
  }
  return out;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return 0.5 * acc;
}

double evaluate_return(const TabularMdp& mdp, const PolicyTable& policy,
                       const RewardTable& reward, bool include_entropy, double entropy_weight) {
  require_matching(mdp, reward);
  const TransitionTable visits = discounted_visitation(mdp, policy);
  double total = 0.0;
  for (std::size_t s = 0; s < mdp.n_states; ++s) {
    double state_mass = 0.0;
    for (std::size_t a = 0; a < mdp.n_actions; ++a) {
      const auto row = visits.row(s, a);
      for (std::size_t next = 0; next < mdp.n_states; ++next) {
        if (row[next] == 0.0) continue;
        total += row[next] * reward.value(s, a, next);
        state_mass += row[next];
      }
    }
    if (include_entropy) total += entropy_weight * state_mass * entropy(policy.row(s));
  }
  return total;
}

std::string soft_solution_to_json(const SoftSolution& solution, int indent) {
  detail::Json j{{"q", detail::to_json(solution.q)},
                 {"v", solution.v},
                 {"policy", detail::to_json(solution.policy)},
                 {"iterations_used", solution.iterations_used},
                 {"residual", solution.residual},
                 {"converged", solution.converged},
                 {"entropy_weight", solution.entropy_weight}};
  return j.dump(indent);
}

std::string occupancy_to_json(const OccupancyMeasure& occupancy, int indent) {
  detail::Json j{{"rho", detail::to_json(occupancy.rho)},
                 {"state_marginal", occupancy.state_marginal()}};
  return j.dump(indent);
}

}  // namespace irl
