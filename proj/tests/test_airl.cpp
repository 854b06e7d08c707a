#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "irl/airl.hpp"
#include "irl/shaping.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace irl;

namespace {

DiscriminatorParams log_policy_params(const PolicyTable& pi, double discount) {
  DiscriminatorParams p = DiscriminatorParams::zeros(LearnerVariant::airl_state_action,
                                                     pi.n_states(), pi.n_actions(), discount);
  for (std::size_t s = 0; s < pi.n_states(); ++s) {
    for (std::size_t a = 0; a < pi.n_actions(); ++a) p.g.mutable_at(s, a) = std::log(pi(s, a));
  }
  return p;
}

/// f recomputed from the raw tables.
double f_ref(const DiscriminatorParams& p, std::size_t n_actions, std::size_t s, std::size_t a,
             std::size_t next) {
  const auto g = p.g.values();
  const double gs = p.g.kind() == RewardKind::state_only ? g[s] : g[s * n_actions + a];
  return gs + p.discount * p.h[next] - p.h[s];
}

LearnerConfig short_config(LearnerVariant variant, std::size_t iterations) {
  LearnerConfig c;
  c.variant = variant;
  c.iterations = iterations;
  return c;
}

}  // namespace

TEST(FValue, ZeroShapingGivesG) {
  auto p = DiscriminatorParams::zeros(LearnerVariant::airl_state_only, 3, 2, 0.9);
  p.g = RewardTable::state_only({1.0, -2.0, 0.5});
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t next = 0; next < 3; ++next) EXPECT_EQ(f_value(p, s, 1, next), p.g.at(s));
  }
}

TEST(FValue, ConstantShapingTelescopes) {
  auto p = DiscriminatorParams::zeros(LearnerVariant::airl_state_only, 3, 2, 0.9);
  p.g = RewardTable::state_only({1.0, -2.0, 0.5});
  p.h = {4.0, 4.0, 4.0};
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_NEAR(f_value(p, s, 0, 2), p.g.at(s) + (0.9 - 1.0) * 4.0, 1e-14);
  }
}

TEST(FValue, TrueRewardAndValueGiveTheAdvantage) {
  const TabularMdp mdp = tabular_task_mdp(4);
  SoftViOptions opts;
  opts.tolerance = 1e-13;
  const auto sol = soft_value_iteration(mdp, mdp.reward, opts);
  auto p = DiscriminatorParams::zeros(LearnerVariant::airl_state_only, 16, 4, mdp.discount);
  p.g = mdp.reward;
  p.h = sol.v;
  const auto adv = advantage(sol);
  for (std::size_t s = 0; s < 16; ++s) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t next = 0; next < 16; ++next) {
        if (mdp.transition(s, a, next) == 0.0) continue;
        EXPECT_NEAR(f_value(p, s, a, next), adv(s, a), 1e-8);
      }
    }
  }
}

TEST(FValue, ArityMismatchIsRejected) {
  auto p = DiscriminatorParams::zeros(LearnerVariant::airl_state_only, 2, 2, 0.9);
  EXPECT_THROW(f_value(p, 0, 0, 5), std::out_of_range);
  p.g = RewardTable::zeros(RewardKind::transition, 2, 2);
  EXPECT_THROW(f_value(p, 0, 0, 0), std::invalid_argument);
}

TEST(Discriminator, ProbabilityExamples) {
  const PolicyTable pi = oracle::random_policy(2, 3, 1);
  auto p = log_policy_params(pi, 0.9);
  EXPECT_NEAR(discriminator_prob(p, pi, 1, 2, 0), 0.5, 1e-15);
  p.g.mutable_at(1, 2) += std::log(3.0);
  EXPECT_NEAR(discriminator_prob(p, pi, 1, 2, 0), 0.75, 1e-15);
  p.g.mutable_at(1, 2) = -800.0;
  EXPECT_LT(discriminator_prob(p, pi, 1, 2, 0), 1e-300);
  EXPECT_GE(discriminator_prob(p, pi, 1, 2, 0), 0.0);
  p.g.mutable_at(1, 2) = 800.0;
  EXPECT_EQ(discriminator_prob(p, pi, 1, 2, 0), 1.0);
}

TEST(Discriminator, LossAtEvenOddsIsTwoLogTwo) {
  const TabularMdp mdp = oracle::small_mdp(2, 5, 3);
  const PolicyTable pi = oracle::random_policy(mdp.n_states, mdp.n_actions, 4);
  const auto p = log_policy_params(pi, mdp.discount);
  const auto e = occupancy(mdp, oracle::random_policy(mdp.n_states, mdp.n_actions, 5));
  const auto n = occupancy(mdp, pi);
  EXPECT_NEAR(discriminator_loss(p, pi, e, n), 2.0 * std::log(2.0), 1e-12);
}

TEST(Discriminator, ZeroInitLossOnTheTabularTask) {
  // Zero parameters against a uniform policy give f - log pi = log 4, so D = 4/5.
  const TabularMdp mdp = tabular_task_mdp(0);
  const auto p = DiscriminatorParams::zeros(LearnerVariant::airl_state_only, 16, 4, 0.9);
  const auto pi = uniform_policy(16, 4);
  const auto loss = discriminator_loss(p, pi, occupancy(mdp, expert_policy(mdp)), occupancy(mdp, pi));
  EXPECT_NEAR(loss, std::log(5.0 / 4.0) + std::log(5.0), 1e-12);
  EXPECT_NEAR(loss, 1.8326, 1e-4);
}

TEST(Discriminator, SeparatedBatchesDriveLossToZero) {
  const PolicyTable pi = uniform_policy(3, 2);
  auto p = DiscriminatorParams::zeros(LearnerVariant::airl_state_action, 3, 2, 0.9);
  p.g.mutable_at(0, 0) = 60.0;
  p.g.mutable_at(1, 1) = -60.0;
  const TransitionBatch expert{{0, 0, 1}, {0, 0, 2}};
  const TransitionBatch negatives{{1, 1, 0}, {1, 1, 2}};
  EXPECT_LT(discriminator_loss(p, pi, expert, negatives), 1e-20);
}

TEST(Discriminator, LossMatchesExhaustiveSum) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (auto variant : {LearnerVariant::airl_state_only, LearnerVariant::airl_state_action}) {
      TabularMdp mdp = random_mdp(3, 2, RewardTable::zeros(RewardKind::state_only, 3, 2), seed);
      auto inst = oracle::discriminator_instance(seed, variant);
      inst.mdp = mdp;
      inst.params = DiscriminatorParams::zeros(variant, 3, 2, mdp.discount);
      const auto g = oracle::random_vector(inst.params.g.values().size(), seed + 30, 2.0);
      std::copy(g.begin(), g.end(), inst.params.g.values().begin());
      inst.params.h = oracle::random_vector(3, seed + 40, 2.0);
      inst.policy = oracle::random_policy(3, 2, seed + 1);
      inst.expert = occupancy(mdp, oracle::random_policy(3, 2, seed + 2));
      inst.negatives = occupancy(mdp, oracle::random_policy(3, 2, seed + 3));

      double expected = 0.0;
      for (std::size_t s = 0; s < 3; ++s) {
        for (std::size_t a = 0; a < 2; ++a) {
          for (std::size_t next = 0; next < 3; ++next) {
            const double ef = std::exp(f_ref(inst.params, 2, s, a, next));
            const double d = ef / (ef + inst.policy(s, a));
            expected -= inst.expert.rho(s, a, next) * std::log(d);
            expected -= inst.negatives.rho(s, a, next) * std::log(1.0 - d);
          }
        }
      }
      EXPECT_NEAR(discriminator_loss(inst.params, inst.policy, inst.expert, inst.negatives),
                  expected, 1e-10);
    }
  }
}

TEST(Discriminator, GradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (auto variant : {LearnerVariant::airl_state_only, LearnerVariant::airl_state_action}) {
      const auto inst = oracle::discriminator_instance(seed, variant);
      EXPECT_LE(oracle::finite_difference_error(inst), 1e-4) << "seed " << seed;
    }
  }
}

TEST(Discriminator, BatchGradientMatchesFiniteDifferences) {
  const TabularMdp mdp = oracle::small_mdp(3, 4, 3);
  const auto pi = oracle::random_policy(mdp.n_states, mdp.n_actions, 2);
  oracle::DiscriminatorInstance inst;
  inst.mdp = mdp;
  inst.policy = pi;
  inst.params = DiscriminatorParams::zeros(LearnerVariant::airl_state_only, mdp.n_states,
                                           mdp.n_actions, mdp.discount);
  inst.params.h = oracle::random_vector(mdp.n_states, 3);
  const auto ex = flatten(sample_trajectories(mdp, oracle::random_policy(mdp.n_states, mdp.n_actions, 5), 20, 1));
  const auto ng = flatten(sample_trajectories(mdp, pi, 20, 2));
  inst.expert = empirical_occupancy(ex, mdp.n_states, mdp.n_actions);
  inst.negatives = empirical_occupancy(ng, mdp.n_states, mdp.n_actions);
  EXPECT_LE(oracle::finite_difference_error(inst), 1e-4);
  const auto a = discriminator_grad(inst.params, pi, ex, ng);
  const auto b = discriminator_grad(inst.params, pi, inst.expert, inst.negatives);
  EXPECT_EQ(a.g, b.g);
  EXPECT_EQ(a.h, b.h);
}

TEST(Discriminator, GradientVanishesAtTheSymmetricOptimum) {
  const TabularMdp mdp = oracle::small_mdp(6, 5, 3);
  const auto pi = oracle::random_policy(mdp.n_states, mdp.n_actions, 6);
  const auto p = log_policy_params(pi, mdp.discount);
  const auto occ = occupancy(mdp, pi);
  const auto grad = discriminator_grad(p, pi, occ, occ);
  for (double x : grad.g) EXPECT_NEAR(x, 0.0, 1e-10);
  for (double x : grad.h) EXPECT_NEAR(x, 0.0, 1e-10);
}

TEST(Discriminator, UnvisitedStateHasNoShapingGradient) {
  auto inst = oracle::discriminator_instance(3, LearnerVariant::airl_state_only);
  const TransitionBatch expert{{0, 1, 2}, {2, 0, 1}};
  const TransitionBatch negatives{{1, 2, 0}, {0, 0, 0}};
  const auto grad = discriminator_grad(inst.params, inst.policy, expert, negatives);
  EXPECT_EQ(grad.h[3], 0.0);
  EXPECT_EQ(grad.g[3], 0.0);
  EXPECT_NE(grad.h[0], 0.0);
}

TEST(Discriminator, GradientEqualsDemoMinusReweightedMixture) {
  // -dL/dg = E_demo[grad f] - E_q[grad f] with q = (expert + negatives) * D.
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = oracle::discriminator_instance(seed, LearnerVariant::airl_state_action);
    const auto grad = discriminator_grad(inst.params, inst.policy, inst.expert, inst.negatives);
    std::vector<double> expected(grad.g.size(), 0.0);
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t next = 0; next < 4; ++next) {
          const double ef = std::exp(f_ref(inst.params, 3, s, a, next));
          const double d = ef / (ef + inst.policy(s, a));
          const double mix = inst.expert.rho(s, a, next) + inst.negatives.rho(s, a, next);
          expected[s * 3 + a] -= inst.expert.rho(s, a, next) - mix * d;
        }
      }
    }
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(grad.g[i], expected[i], 1e-8);
  }
}

TEST(ExtractReward, EqualsFMinusLogPolicy) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = oracle::discriminator_instance(seed, LearnerVariant::airl_state_only);
    const RewardTable r = extract_reward(inst.params, inst.policy);
    for (std::size_t s = 0; s < 4; ++s) {
      for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t next = 0; next < 4; ++next) {
          const double expected = f_ref(inst.params, 3, s, a, next) - std::log(inst.policy(s, a));
          EXPECT_NEAR(r.at(s, a, next), expected, 1e-10);
          const double d = discriminator_prob(inst.params, inst.policy, s, a, next);
          EXPECT_NEAR(r.at(s, a, next), std::log(d) - std::log(1.0 - d), 1e-8);
        }
      }
    }
  }
}

TEST(ExtractReward, EvenOddsAndUniformPolicy) {
  const auto pi = oracle::random_policy(3, 2, 8);
  const RewardTable even = extract_reward(log_policy_params(pi, 0.9), pi);
  for (double v : even.values()) {
    EXPECT_NEAR(v, 0.0, 1e-14);
  }
  auto inst = oracle::discriminator_instance(1, LearnerVariant::airl_state_only);
  const RewardTable r = extract_reward(inst.params, uniform_policy(4, 3));
  const RewardTable f = f_table(inst.params, 3);
  for (std::size_t i = 0; i < r.values().size(); ++i) {
    EXPECT_NEAR(r.values()[i], f.values()[i] + std::log(3.0), 1e-12);
  }
}

TEST(Config, ValidationRejectsBadValues) {
  LearnerConfig c;
  EXPECT_NO_THROW(validate_config(c));
  c.disc_step_size = 0.0;
  EXPECT_THROW(validate_config(c), std::invalid_argument);
  c = {};
  c.replay_window = 0;
  EXPECT_THROW(validate_config(c), std::invalid_argument);
  c = {};
  c.entropy_weight = -1.0;
  EXPECT_THROW(validate_config(c), std::invalid_argument);
  EXPECT_EQ(learner_variant_from_string("airl_state_action"), LearnerVariant::airl_state_action);
  EXPECT_EQ(to_string(DataMode::sampled), "sampled");
  EXPECT_THROW(learner_variant_from_string("gail"), std::invalid_argument);
}

TEST(AirlTrain, EmptyDemosAreRejected) {
  const TabularMdp mdp = tabular_task_mdp(0);
  EXPECT_THROW(airl_train(mdp, std::vector<Trajectory>{}, LearnerConfig{}), std::invalid_argument);
}

TEST(AirlTrain, NonFiniteParametersRaiseDivergence) {
  const TabularMdp mdp = tabular_task_mdp(0);
  LearnerConfig c = short_config(LearnerVariant::airl_state_only, 5);
  c.disc_step_size = std::numeric_limits<double>::infinity();
  try {
    airl_train(mdp, make_expert_data(mdp, c), c);
    FAIL() << "expected TrainingDivergence";
  } catch (const TrainingDivergence& e) {
    EXPECT_EQ(e.iteration(), 0u);
  }
}

TEST(AirlTrain, ZeroIterationsKeepsTheInitialState) {
  const TabularMdp mdp = tabular_task_mdp(0);
  const LearnerConfig c = short_config(LearnerVariant::airl_state_only, 0);
  const auto result = airl_train(mdp, make_expert_data(mdp, c), c);
  EXPECT_TRUE(result.history.records.empty());
  for (double v : result.params.g.values()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(result.policy, uniform_policy(16, 4));
}

TEST(AirlTrain, HistoryHasOneFiniteRecordPerIteration) {
  const TabularMdp mdp = tabular_task_mdp(1);
  const LearnerConfig c = short_config(LearnerVariant::airl_state_only, 30);
  const auto result = airl_train(mdp, make_expert_data(mdp, c), c);
  ASSERT_EQ(result.history.records.size(), 30u);
  std::size_t sweeps = 0;
  for (std::size_t i = 0; i < 30; ++i) {
    const auto& r = result.history.records[i];
    EXPECT_EQ(r.iteration, i);
    EXPECT_TRUE(std::isfinite(r.disc_loss) && std::isfinite(r.true_return) &&
                std::isfinite(r.reward_error) && std::isfinite(r.g_delta));
    EXPECT_GT(r.cumulative_vi_sweeps, sweeps);
    sweeps = r.cumulative_vi_sweeps;
  }
}

TEST(AirlTrain, StateActionVariantKeepsShapingAtZero) {
  const TabularMdp mdp = tabular_task_mdp(1);
  const LearnerConfig c = short_config(LearnerVariant::airl_state_action, 20);
  const auto result = airl_train(mdp, make_expert_data(mdp, c), c);
  EXPECT_EQ(result.params.g.kind(), RewardKind::state_action);
  for (double v : result.params.h) EXPECT_EQ(v, 0.0);
}

TEST(AirlTrain, DeterministicUnderFixedSeed) {
  const TabularMdp mdp = tabular_task_mdp(2);
  for (auto mode : {DataMode::exact_occupancy, DataMode::sampled}) {
    LearnerConfig c = short_config(LearnerVariant::airl_state_only, 15);
    c.mode = mode;
    c.seed = 9;
    const auto a = airl_train(mdp, make_expert_data(mdp, c), c);
    const auto b = airl_train(mdp, make_expert_data(mdp, c), c);
    EXPECT_EQ(a.history.to_csv(), b.history.to_csv());
    EXPECT_EQ(a.params.g, b.params.g);
    EXPECT_EQ(a.params.h, b.params.h);
    if (mode == DataMode::sampled) {
      c.seed = 10;
      const auto other = airl_train(mdp, make_expert_data(mdp, c), c);
      EXPECT_NE(a.history.to_csv(), other.history.to_csv());
    }
  }
}

TEST(AirlTrain, ImitatesUniformExpertOnZeroReward) {
  const TabularMdp mdp =
      random_mdp(6, 3, RewardTable::zeros(RewardKind::state_only, 6, 3), 4);
  const auto expert = occupancy(mdp, uniform_policy(6, 3));
  const LearnerConfig c = short_config(LearnerVariant::airl_state_only, 200);
  const auto result = airl_train(mdp, expert, c);
  const auto learned = occupancy(mdp, result.policy);
  EXPECT_LE(total_variation(learned.rho.values(), expert.rho.values()), 0.02);
}

TEST(AirlTrain, ConvergedDiscriminatorSitsAtEvenOdds) {
  const TabularMdp mdp = tabular_task_mdp(0);
  const LearnerConfig c;
  const auto result = airl_train(mdp, make_expert_data(mdp, c), c);
  const auto pi_e = expert_policy(mdp);
  double worst_d = 0.0;
  double worst_f = 0.0;
  for (std::size_t s = 0; s < 16; ++s) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t next = 0; next < 16; ++next) {
        if (mdp.transition(s, a, next) == 0.0) continue;
        worst_d = std::max(worst_d,
                           std::abs(discriminator_prob(result.params, result.policy, s, a, next) - 0.5));
        worst_f = std::max(worst_f, std::abs(f_value(result.params, s, a, next) - std::log(pi_e(s, a))));
      }
    }
  }
  EXPECT_LE(worst_d, 0.02);
  EXPECT_LE(worst_f, 0.05);
}

TEST(AirlTrain, DeterministicDecomposableMdpRecoversRewardAndValue) {
  const std::size_t n = 8;
  RandomMdpOptions options;
  options.transitions = {1, 1.0, true};
  options.require_decomposable = true;
  const auto r = oracle::random_vector(n, 21);
  const TabularMdp mdp = random_mdp(n, 3, RewardTable::state_only(r), 21, options);
  const LearnerConfig c;
  const auto result = airl_train(mdp, make_expert_data(mdp, c), c);
  EXPECT_LE(centered_distance(result.params.g, mdp.reward, 3), 0.1);
  const auto v_star = soft_value_iteration(mdp, mdp.reward).v;
  EXPECT_LE(oracle::centered_gap(result.params.h, v_star), 0.1);
}

TEST(History, CsvAndJsonLayout) {
  const TabularMdp mdp = tabular_task_mdp(1);
  const LearnerConfig c = short_config(LearnerVariant::airl_state_only, 3);
  const auto history = airl_train(mdp, make_expert_data(mdp, c), c).history;
  const std::string csv = history.to_csv();
  EXPECT_EQ(csv.rfind("iter,disc_loss,true_return,reward_error,g_delta\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  const auto j = nlohmann::json::parse(history.to_json());
  ASSERT_EQ(j.at("records").size(), 3u);
  EXPECT_EQ(j.at("records").at(2).at("iter").get<int>(), 2);
  EXPECT_DOUBLE_EQ(j.at("records").at(1).at("disc_loss").get<double>(),
                   history.records[1].disc_loss);
}

TEST(Params, JsonRoundTripAndStrictness) {
  auto inst = oracle::discriminator_instance(2, LearnerVariant::airl_state_action);
  const auto back = params_from_json(params_to_json(inst.params));
  EXPECT_EQ(back.g, inst.params.g);
  EXPECT_EQ(back.h, inst.params.h);
  EXPECT_EQ(back.discount, inst.params.discount);
  auto j = nlohmann::json::parse(params_to_json(inst.params));
  j["extra"] = 1;
  EXPECT_ANY_THROW(params_from_json(j.dump()));
}

TEST(GanGcl, HandComputedTrajectoryDiscriminator) {
  TabularMdp mdp;
  mdp.n_states = 2;
  mdp.n_actions = 2;
  mdp.transition = TransitionTable(2, 2);
  mdp.transition(0, 0, 1) = 1.0;
  mdp.transition(0, 1, 0) = 1.0;
  mdp.transition(1, 0, 0) = 1.0;
  mdp.transition(1, 1, 1) = 1.0;
  mdp.reward = RewardTable::zeros(RewardKind::state_only, 2, 2);
  mdp.initial_dist = {1.0, 0.0};
  mdp.horizon = 2;

  PolicyTable pi(2, 2);
  pi(0, 0) = 0.25;
  pi(0, 1) = 0.75;
  pi(1, 0) = 0.5;
  pi(1, 1) = 0.5;
  TrajectoryScorer scorer{StateActionTable(2, 2)};
  scorer.f_step(0, 0) = 0.3;
  scorer.f_step(0, 1) = -0.4;
  scorer.f_step(1, 0) = 1.1;
  scorer.f_step(1, 1) = -0.2;

  const Trajectory t1{{{0, 0}, {1, 1}}, 1};  // 0 -a0-> 1 -a1-> 1
  const Trajectory t2{{{0, 1}, {0, 0}}, 1};  // 0 -a1-> 0 -a0-> 1
  const double d1 = std::exp(0.1) / (std::exp(0.1) + 0.125);
  const double d2 = std::exp(-0.1) / (std::exp(-0.1) + 0.1875);
  EXPECT_NEAR(trajectory_discriminator(mdp, scorer, pi, t1), d1, 1e-14);
  EXPECT_NEAR(trajectory_discriminator(mdp, scorer, pi, t2), d2, 1e-14);
  EXPECT_NEAR(trajectory_log_prob(mdp, pi, t1), std::log(0.125), 1e-14);
  EXPECT_NEAR(trajectory_score(scorer, t2), -0.1, 1e-15);
  EXPECT_NEAR(trajectory_loss(mdp, scorer, pi, {t1}, {t2}), -std::log(d1) - std::log(1.0 - d2),
              1e-12);

  // A spread-out start distribution enters both densities and cancels in D.
  mdp.initial_dist = {0.5, 0.5};
  EXPECT_NEAR(trajectory_log_prob(mdp, pi, t1), std::log(0.0625), 1e-14);
  EXPECT_NEAR(trajectory_discriminator(mdp, scorer, pi, t1), d1, 1e-14);
  EXPECT_EQ(trajectory_log_prob(mdp, pi, Trajectory{{{0, 0}, {0, 0}}, 1}),
            -std::numeric_limits<double>::infinity());
}

TEST(GanGcl, EvenOddsLossIsTwoLogTwo) {
  const TabularMdp mdp = tabular_task_mdp(3);
  const auto pi = oracle::random_policy(16, 4, 3);
  TrajectoryScorer scorer{StateActionTable(16, 4)};
  for (std::size_t i = 0; i < 64; ++i) scorer.f_step.values()[i] = std::log(pi.values()[i]);
  const auto ex = sample_trajectories(mdp, expert_policy(mdp), 10, 1);
  const auto ng = sample_trajectories(mdp, pi, 10, 2);
  EXPECT_NEAR(trajectory_loss(mdp, scorer, pi, ex, ng), 2.0 * std::log(2.0), 1e-12);
}

TEST(GanGcl, GradientMatchesFiniteDifferences) {
  const TabularMdp mdp = oracle::small_mdp(5, 4, 3);
  const auto pi = oracle::random_policy(mdp.n_states, mdp.n_actions, 7);
  TrajectoryScorer scorer{StateActionTable(mdp.n_states, mdp.n_actions)};
  const auto init = oracle::random_vector(mdp.n_states * mdp.n_actions, 12);
  std::copy(init.begin(), init.end(), scorer.f_step.values().begin());
  const auto ex = sample_trajectories(mdp, oracle::random_policy(mdp.n_states, mdp.n_actions, 8), 6, 1);
  const auto ng = sample_trajectories(mdp, pi, 6, 2);
  const auto grad = trajectory_loss_grad(mdp, scorer, pi, ex, ng);
  const double eps = 1e-5;
  for (std::size_t i = 0; i < grad.values().size(); ++i) {
    auto plus = scorer;
    auto minus = scorer;
    plus.f_step.values()[i] += eps;
    minus.f_step.values()[i] -= eps;
    const double fd = (trajectory_loss(mdp, plus, pi, ex, ng) - trajectory_loss(mdp, minus, pi, ex, ng)) / (2 * eps);
    EXPECT_LE(std::abs(fd - grad.values()[i]) / std::max({std::abs(fd), std::abs(grad.values()[i]), 1e-6}),
              1e-4);
  }
}

TEST(GanGcl, TrainingIsDeterministicAndSampledOnly) {
  const TabularMdp mdp = tabular_task_mdp(0);
  LearnerConfig c = short_config(LearnerVariant::gan_gcl_trajectory, 10);
  const auto demos = sample_trajectories(mdp, expert_policy(mdp), 20, 3);
  EXPECT_THROW(gan_gcl_train(mdp, demos, c), std::invalid_argument);
  c.mode = DataMode::sampled;
  c.n_policy_trajectories = 10;
  const auto a = gan_gcl_train(mdp, demos, c);
  const auto b = gan_gcl_train(mdp, demos, c);
  EXPECT_EQ(a.history.to_csv(), b.history.to_csv());
  EXPECT_EQ(a.scorer.f_step, b.scorer.f_step);
  EXPECT_EQ(a.history.records.size(), 10u);
  EXPECT_THROW(gan_gcl_train(mdp, {}, c), std::invalid_argument);
}
