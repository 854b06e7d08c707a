#include <benchmark/benchmark.h>

#include "irl/airl.hpp"
#include "irl/mdp.hpp"
#include "irl/soft_rl.hpp"

namespace {

irl::TabularMdp dense_mdp(std::size_t n) {
  return irl::random_mdp(n, 4, irl::indicator_reward(n, 0), 7);
}

void BM_SoftValueIteration(benchmark::State& state) {
  const auto mdp = dense_mdp(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(irl::soft_value_iteration(mdp, mdp.reward));
  }
}
BENCHMARK(BM_SoftValueIteration)->Arg(16)->Arg(64);

void BM_Occupancy(benchmark::State& state) {
  const auto mdp = dense_mdp(static_cast<std::size_t>(state.range(0)));
  const auto policy = irl::uniform_policy(mdp.n_states, mdp.n_actions);
  for (auto _ : state) benchmark::DoNotOptimize(irl::occupancy(mdp, policy));
}
BENCHMARK(BM_Occupancy)->Arg(16)->Arg(64);

void BM_DiscriminatorGradient(benchmark::State& state) {
  const auto mdp = irl::tabular_task_mdp(0);
  const auto expert = irl::occupancy(mdp, irl::soft_value_iteration(mdp, mdp.reward).policy);
  const auto policy = irl::uniform_policy(mdp.n_states, mdp.n_actions);
  const auto negatives = irl::occupancy(mdp, policy);
  const auto params = irl::DiscriminatorParams::zeros(irl::LearnerVariant::airl_state_only,
                                                      mdp.n_states, mdp.n_actions, mdp.discount);
  for (auto _ : state) {
    benchmark::DoNotOptimize(irl::discriminator_grad(params, policy, expert, negatives));
  }
}
BENCHMARK(BM_DiscriminatorGradient);

// One learner iteration: the discriminator steps plus the policy re-solve.
void BM_AirlIteration(benchmark::State& state) {
  const auto mdp = irl::tabular_task_mdp(0);
  const irl::ExpertData demos =
      irl::occupancy(mdp, irl::soft_value_iteration(mdp, mdp.reward).policy);
  irl::LearnerConfig config;
  config.iterations = 1;
  for (auto _ : state) benchmark::DoNotOptimize(irl::airl_train(mdp, demos, config));
}
BENCHMARK(BM_AirlIteration);

}  // namespace

BENCHMARK_MAIN();
