#include <gtest/gtest.h>

#include <cmath>

#include "irl/shaping.hpp"
#include "irl/transfer.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace irl;

TEST(Recovery, ZeroIterationsGiveTheZeroInitAnchor) {
  const TabularMdp mdp = tabular_task_mdp(0);
  LearnerConfig c;
  c.iterations = 0;
  const auto r = run_recovery(mdp, c);
  // Mean-centered zero against mean-centered indicator: the largest gap is 15/16.
  EXPECT_NEAR(r.recovery_error, 15.0 / 16.0, 1e-15);
  EXPECT_THROW(
      [&] {
        c.variant = LearnerVariant::gan_gcl_trajectory;
        run_recovery(mdp, c);
      }(),
      std::invalid_argument);
}

TEST(Recovery, JsonCarriesErrorsAndTables) {
  const TabularMdp mdp = tabular_task_mdp(0);
  LearnerConfig c;
  c.iterations = 2;
  const auto j = nlohmann::json::parse(recovery_to_json(run_recovery(mdp, c)));
  EXPECT_EQ(j.at("variant"), "airl_state_only");
  EXPECT_EQ(j.at("h").size(), 16u);
  EXPECT_TRUE(j.at("recovery_error").is_number());
}

TEST(Transfer, NormalizedScoreDefinition) {
  EXPECT_DOUBLE_EQ(normalized_score(3.0, 1.0, 5.0), 0.5);
  EXPECT_DOUBLE_EQ(normalized_score(1.0, 1.0, 5.0), 0.0);
  EXPECT_THROW(normalized_score(1.0, 2.0, 2.0), std::invalid_argument);
}

TEST(Transfer, SelfTransferOfStateOnlyRewardIsNearOptimal) {
  const TabularMdp mdp = tabular_task_mdp(1);
  const LearnerConfig c;
  const auto t = run_transfer(mdp, mdp, c);
  EXPECT_GE(t.score, 0.95);
  EXPECT_GE(t.ground_truth_score, 0.999);
  const double tol = 1e-6;
  EXPECT_GE(t.returns.ground_truth_optimal + tol, t.returns.reoptimized_on_learned);
  EXPECT_GE(t.returns.ground_truth_optimal + tol, t.returns.uniform_random);
  EXPECT_LE(t.score, 1.0 + tol);
}

TEST(Transfer, CurveStartsAtUniformAndIsOrderedInSweeps) {
  const TabularMdp train = tabular_task_mdp(2);
  const TabularMdp test = tabular_task_mdp(1002);
  LearnerConfig c;
  c.iterations = 50;
  const auto t = run_transfer(train, test, c);
  ASSERT_GE(t.curve.size(), 2u);
  EXPECT_EQ(t.curve.front().vi_sweeps, 0u);
  EXPECT_DOUBLE_EQ(t.curve.front().true_return, t.returns.uniform_random);
  for (std::size_t i = 1; i < t.curve.size(); ++i) {
    EXPECT_GT(t.curve[i].vi_sweeps, t.curve[i - 1].vi_sweeps);
  }
  EXPECT_NEAR(t.curve.back().true_return, t.returns.reoptimized_on_learned, 1e-6);
}

TEST(Transfer, ShapeMismatchIsRejected) {
  const TabularMdp a = tabular_task_mdp(0);
  const TabularMdp b = counterexample_mdp(CounterexampleVariant::original);
  EXPECT_THROW(run_transfer(a, b, LearnerConfig{}), std::invalid_argument);
}

TEST(Transfer, ExportsCsvAndJson) {
  const TabularMdp mdp = tabular_task_mdp(0);
  LearnerConfig c;
  c.iterations = 3;
  auto t = run_transfer(mdp, tabular_task_mdp(1000), c);
  t.train_seed = 0;
  t.test_seed = 1000;
  const std::string csv = transfer_curve_csv({t});
  EXPECT_EQ(csv.rfind("train_seed,test_seed,variant,vi_sweeps,true_return\n", 0), 0u);
  EXPECT_NE(csv.find("\n0,1000,airl_state_only,0,"), std::string::npos);
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')),
            t.curve.size() + 1);
  const auto j = nlohmann::json::parse(transfer_to_json(t));
  EXPECT_EQ(j.at("curve").size(), t.curve.size());
  EXPECT_TRUE(j.at("returns").contains("uniform_random"));
}

TEST(Aggregate, CarriesConvergedRunsForward) {
  TransferResult a;
  a.curve = {{0, 1.0}, {1, 2.0}, {2, 3.0}};
  TransferResult b;
  b.curve = {{0, 0.0}, {1, 4.0}};
  const auto points = aggregate_curves({a, b});
  ASSERT_EQ(points.size(), 3u);
  EXPECT_DOUBLE_EQ(points[0].mean, 0.5);
  EXPECT_DOUBLE_EQ(points[2].mean, 3.5);
  EXPECT_DOUBLE_EQ(points[2].min, 3.0);
  EXPECT_DOUBLE_EQ(points[2].max, 4.0);
  const std::string csv = aggregate_curve_csv(points);
  EXPECT_EQ(csv, "vi_sweeps,mean,min,max\n0,0.5,0,1\n1,3,2,4\n2,3.5,3,4\n");
  EXPECT_TRUE(aggregate_curves({}).empty());
}

TEST(Probe, TrueRewardAgreesWithItself) {
  const TabularMdp mdp = tabular_task_mdp(0);
  EXPECT_DOUBLE_EQ(disentanglement_probe(mdp, mdp.reward, 20, 1).fraction(), 1.0);
}

TEST(Probe, RecoveredStateOnlyRewardIsDisentangled) {
  const TabularMdp mdp = tabular_task_mdp(0);
  const auto recovery = run_recovery(mdp, LearnerConfig{});
  const auto probe = disentanglement_probe(mdp, recovery.training.params.g, 50, 3);
  EXPECT_EQ(probe.agrees.size(), 50u);
  EXPECT_DOUBLE_EQ(probe.fraction(), 1.0);
}

TEST(Probe, ShapedCounterexampleRewardFailsOnSwappedDynamics) {
  const TabularMdp mdp = counterexample_mdp(CounterexampleVariant::original);
  const TabularMdp swapped = counterexample_mdp(CounterexampleVariant::modified);
  const auto probe =
      disentanglement_probe(mdp, counterexample_shaped_reward(), 20, 5, {swapped.transition});
  ASSERT_EQ(probe.agrees.size(), 21u);
  EXPECT_FALSE(probe.agrees.back());
  EXPECT_LT(probe.fraction(), 1.0);
}

TEST(Probe, MaximizingActionsUseTheTieBand) {
  PolicyTable pi(2, 3);
  pi(0, 0) = 0.4;
  pi(0, 1) = 0.4 - 1e-9;
  pi(0, 2) = 0.2 + 1e-9;
  pi(1, 2) = 1.0;
  const auto sets = maximizing_actions(pi);
  EXPECT_EQ(sets[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(sets[1], (std::vector<std::size_t>{2}));
}
