#include "irl_cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <stdexcept>

#include "irl/format.hpp"
#include "irl/shaping.hpp"
#include "irl/transfer.hpp"
#include "irl_cli/io.hpp"
#include "irl_cli/worker_pool.hpp"
#include "json.hpp"

namespace irl::cli {

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

constexpr double kRecoveryThreshold = 0.1;
constexpr double kShapedThreshold = 0.3;
constexpr double kAdvantageThreshold = 0.05;
constexpr double kTransferOptimal = 0.95;
constexpr double kTransferMarginal = 0.3;

CounterexampleVariant counterexample_variant(const std::string& name) {
  if (name == "original") return CounterexampleVariant::original;
  if (name == "modified") return CounterexampleVariant::modified;
  throw UsageError("--counterexample must be 'original' or 'modified'");
}

/// Mean-centered reward on an n_states x n_actions grid.
std::string heatmap_csv(const RewardTable& reward, std::size_t n_actions) {
  if (reward.kind() == RewardKind::transition) {
    throw std::invalid_argument("heatmap needs a state or state-action reward");
  }
  const RewardTable centered = mean_center(reward.broadcast(RewardKind::state_action, n_actions));
  std::string out = "state (mean-centered reward)";
  for (std::size_t a = 0; a < n_actions; ++a) out += ",a" + std::to_string(a);
  out += '\n';
  for (std::size_t s = 0; s < centered.n_states(); ++s) {
    out += std::to_string(s);
    for (std::size_t a = 0; a < n_actions; ++a) out += ',' + format_float(centered.at(s, a));
    out += '\n';
  }
  return out;
}

std::string dump(const Json& j) { return j.dump(2) + '\n'; }

Json parse_json(const std::string& text) { return Json::parse(text); }

/// Runs `body`, removing everything it wrote if it throws.
template <typename Fn>
int with_outputs(OutputSet& outputs, Fn&& body) {
  try {
    return body();
  } catch (...) {
    outputs.discard();
    throw;
  }
}

std::pair<TabularMdp, TabularMdp> transfer_pair(const ExperimentConfig& config, std::size_t i) {
  const auto& t = config.transfer;
  if (t.train_mdp) {
    return {mdp_from_json(read_file(*t.train_mdp)), mdp_from_json(read_file(*t.test_mdp))};
  }
  return {tabular_task_mdp(t.train_seeds[i]), tabular_task_mdp(t.test_seeds[i])};
}

std::string pair_tag(const TransferResult& r) {
  return std::to_string(r.train_seed) + "_" + std::to_string(r.test_seed);
}

Json score_summary(const std::vector<TransferResult>& results) {
  double mean = 0.0;
  double lo = results.front().score;
  double hi = results.front().score;
  for (const auto& r : results) {
    mean += r.score;
    lo = std::min(lo, r.score);
    hi = std::max(hi, r.score);
  }
  mean /= static_cast<double>(results.size());
  return {{"mean", mean}, {"min", lo}, {"max", hi}};
}

RewardTable load_probe_reward(const std::string& path) {
  const Json j = parse_json(read_file(path));
  if (!j.is_object()) throw std::invalid_argument("reward file must hold a JSON object");
  if (j.contains("kind")) return reward_from_json(j.dump());
  if (j.contains("g")) return params_from_json(j.dump()).g;
  if (j.contains("f_step")) {
    if (j.size() != 1) throw std::invalid_argument("unexpected keys next to 'f_step'");
    return reward_from_json(j.at("f_step").dump());
  }
  throw std::invalid_argument("reward file holds neither a reward table nor learned parameters");
}

}  // namespace

ExperimentConfig resolve_config(const CommonOptions& options) {
  ExperimentConfig config;
  if (options.config_path) {
    const fs::path path(*options.config_path);
    std::string text;
    try {
      text = read_file(path);
    } catch (const IoError& e) {
      throw UsageError(e.what());
    }
    const std::string base = path.has_parent_path() ? path.parent_path().string() : ".";
    config = parse_config(text, base);
  }
  if (options.seed) {
    config.learner.seed = *options.seed;
    config.mdp.seed = *options.seed;
  }
  if (options.out_dir) config.out_dir = *options.out_dir;
  if (options.format) config.format = output_format_from_string(*options.format);
  return config;
}

int cmd_generate(const GenerateOptions& options, std::ostream& out) {
  const int picked = static_cast<int>(options.paper_tabular) +
                     static_cast<int>(options.counterexample.has_value()) +
                     static_cast<int>(options.shaped_reward) +
                     static_cast<int>(options.states.has_value() || options.actions.has_value());
  if (picked != 1) {
    throw UsageError(
        "generate needs exactly one of --paper-tabular, --counterexample, --shaped-reward or "
        "--states/--actions");
  }
  if (options.output.empty()) throw UsageError("generate needs -o/--output");

  if (options.shaped_reward) {
    write_file_atomic(options.output, reward_to_json(counterexample_shaped_reward(), 2) + '\n');
    out << "wrote shaped counterexample reward to " << options.output << '\n';
    return kOk;
  }

  TabularMdp mdp;
  if (options.paper_tabular) {
    mdp = tabular_task_mdp(options.seed);
  } else if (options.counterexample) {
    mdp = counterexample_mdp(counterexample_variant(*options.counterexample));
  } else {
    if (!options.states || !options.actions) {
      throw UsageError("--states and --actions go together");
    }
    mdp = random_mdp(*options.states, *options.actions,
                     RewardTable::zeros(RewardKind::state_only, *options.states, *options.actions),
                     options.seed);
  }
  write_file_atomic(options.output, mdp_to_json(mdp, 2) + '\n');
  const auto violations = validate_mdp(mdp);
  out << "wrote " << mdp.n_states << "-state, " << mdp.n_actions << "-action MDP to "
      << options.output << '\n';
  if (violations.empty()) {
    out << "validation: clean\n";
  } else {
    for (const auto& v : violations) out << "validation: " << v.what << '\n';
  }
  return kOk;
}

int cmd_train(const CommonOptions& options, std::ostream& out) {
  const ExperimentConfig config = resolve_config(options);
  const TabularMdp mdp = load_mdp(config.mdp);
  const LearnerConfig& lc = config.learner;
  OutputSet outputs(config.out_dir);

  return with_outputs(outputs, [&] {
    TrainingHistory history;
    RewardTable learned;
    std::string reward_json;
    const ExpertData demos = make_expert_data(mdp, lc);
    if (lc.variant == LearnerVariant::gan_gcl_trajectory) {
      const auto* trajectories = std::get_if<std::vector<Trajectory>>(&demos);
      if (!trajectories) throw UsageError("gan_gcl_trajectory needs learner.mode = sampled");
      auto result = gan_gcl_train(mdp, *trajectories, lc);
      const auto f = result.scorer.f_step.values();
      learned = RewardTable::state_action(mdp.n_states, mdp.n_actions,
                                          std::vector<double>(f.begin(), f.end()));
      reward_json = dump(Json{{"f_step", parse_json(reward_to_json(learned))}});
      history = std::move(result.history);
    } else {
      auto result = airl_train(mdp, demos, lc);
      learned = result.params.g;
      reward_json = params_to_json(result.params, 2) + '\n';
      history = std::move(result.history);
    }

    if (wants_csv(config.format)) outputs.write("history.csv", history.to_csv());
    if (wants_json(config.format)) outputs.write("history.json", history.to_json(2) + '\n');
    outputs.write("reward.json", reward_json);
    outputs.write("heatmap.csv", heatmap_csv(learned, mdp.n_actions));

    out << "variant " << to_string(lc.variant) << ", " << history.records.size()
        << " iterations\n";
    if (!history.records.empty()) {
      const auto& last = history.records.back();
      out << "final reward_error " << format_float(last.reward_error) << ", true_return "
          << format_float(last.true_return) << '\n';
    }
    out << "outputs in " << outputs.dir().string() << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_transfer(const CommonOptions& options, std::ostream& out) {
  const ExperimentConfig config = resolve_config(options);
  const std::size_t n_pairs = config.transfer.train_mdp ? 1 : config.transfer.train_seeds.size();
  OutputSet outputs(config.out_dir);

  return with_outputs(outputs, [&] {
    const auto results = parallel_map<TransferResult>(n_pairs, worker_count(), [&](std::size_t i) {
      const auto [train, test] = transfer_pair(config, i);
      TransferResult r = run_transfer(train, test, config.learner);
      if (!config.transfer.train_mdp) {
        r.train_seed = config.transfer.train_seeds[i];
        r.test_seed = config.transfer.test_seeds[i];
      }
      return r;
    });

    if (wants_csv(config.format)) {
      for (const auto& r : results) outputs.write("curve_" + pair_tag(r) + ".csv", transfer_curve_csv({r}));
      outputs.write("curve_aggregate.csv", aggregate_curve_csv(aggregate_curves(results)));
    }
    const Json scores = score_summary(results);
    const bool state_only = config.learner.variant == LearnerVariant::airl_state_only;
    Json runs = Json::array();
    for (const auto& r : results) runs.push_back(parse_json(transfer_to_json(r)));
    Json summary{{"variant", std::string(to_string(config.learner.variant))},
                 {"learner", parse_json(learner_to_json(config.learner))},
                 {"return_convention",
                  "exact finite-horizon discounted true return, no entropy bonus"},
                 {"scores", scores},
                 {"runs", std::move(runs)}};
    if (state_only) {
      summary["meets_optimal_threshold"] = scores["mean"].get<double>() >= kTransferOptimal;
    } else {
      summary["marginal_over_uniform"] = scores["mean"].get<double>() <= kTransferMarginal;
    }
    if (wants_json(config.format)) outputs.write("transfer_summary.json", dump(summary));

    out << "transfer " << to_string(config.learner.variant) << " over " << results.size()
        << " pair(s): mean normalized score " << format_float(scores["mean"].get<double>())
        << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_reproduce_tabular(const ReproduceOptions& options, std::ostream& out) {
  if (options.seeds.empty()) throw UsageError("reproduce-tabular needs at least one seed");
  ExperimentConfig config = resolve_config(options.common);
  if (options.smoke) config.learner.iterations = 0;
  config.learner.mode = DataMode::exact_occupancy;

  const std::vector<LearnerVariant> variants = {LearnerVariant::airl_state_only,
                                                LearnerVariant::airl_state_action};
  struct Run {
    RecoveryResult recovery;
    TransferResult transfer;
  };
  const std::size_t n_seeds = options.seeds.size();
  OutputSet outputs(config.out_dir);

  return with_outputs(outputs, [&] {
    const auto runs = parallel_map<Run>(2 * n_seeds, worker_count(), [&](std::size_t k) {
      LearnerConfig lc = config.learner;
      lc.variant = variants[k / n_seeds];
      const std::uint64_t seed = options.seeds[k % n_seeds];
      const TabularMdp train = tabular_task_mdp(seed);
      Run run{run_recovery(train, lc), {}};
      run.transfer = transfer_from_recovery(run.recovery, tabular_task_mdp(1000 + seed), lc);
      run.transfer.train_seed = seed;
      run.transfer.test_seed = 1000 + seed;
      return run;
    });

    const auto status = [&](bool ok) -> std::string {
      if (options.smoke) return "skipped";
      return ok ? "pass" : "fail";
    };
    bool all_pass = true;
    Json blocks = Json::array();
    for (std::size_t v = 0; v < variants.size(); ++v) {
      const bool state_only = variants[v] == LearnerVariant::airl_state_only;
      const std::string name(to_string(variants[v]));

      std::string recovery_csv = "seed,recovery_error,advantage_error\n";
      Json per_seed = Json::array();
      bool ok = true;
      for (std::size_t i = 0; i < n_seeds; ++i) {
        const auto& r = runs[v * n_seeds + i].recovery;
        recovery_csv += std::to_string(options.seeds[i]) + ',' + format_float(r.recovery_error) +
                        ',' + format_float(r.advantage_error) + '\n';
        per_seed.push_back({{"seed", options.seeds[i]},
                            {"recovery_error", r.recovery_error},
                            {"advantage_error", r.advantage_error}});
        ok = ok && (state_only ? r.recovery_error <= kRecoveryThreshold
                               : r.recovery_error > kShapedThreshold &&
                                     r.advantage_error <= kAdvantageThreshold);
      }
      Json thresholds = state_only
                            ? Json{{"recovery_error_max", kRecoveryThreshold}}
                            : Json{{"recovery_error_min_exclusive", kShapedThreshold},
                                   {"advantage_error_max", kAdvantageThreshold}};
      blocks.push_back({{"experiment", "recovery_" + name},
                        {"thresholds", std::move(thresholds)},
                        {"runs", std::move(per_seed)},
                        {"status", status(ok)}});
      all_pass = all_pass && ok;
      if (wants_csv(config.format)) outputs.write("recovery_" + name + ".csv", recovery_csv);

      std::vector<TransferResult> transfers;
      for (std::size_t i = 0; i < n_seeds; ++i) transfers.push_back(runs[v * n_seeds + i].transfer);
      Json scores = Json::array();
      bool transfer_ok = true;
      for (const auto& t : transfers) {
        scores.push_back({{"train_seed", t.train_seed},
                          {"test_seed", t.test_seed},
                          {"score", t.score},
                          {"ground_truth_score", t.ground_truth_score},
                          {"returns",
                           {{"ground_truth_optimal", t.returns.ground_truth_optimal},
                            {"reoptimized_on_learned", t.returns.reoptimized_on_learned},
                            {"uniform_random", t.returns.uniform_random}}}});
        transfer_ok = transfer_ok &&
                      (state_only ? t.score >= kTransferOptimal : t.score <= kTransferMarginal);
      }
      Json transfer_thresholds = state_only ? Json{{"score_min", kTransferOptimal}}
                                            : Json{{"score_max", kTransferMarginal}};
      blocks.push_back({{"experiment", "transfer_" + name},
                        {"thresholds", std::move(transfer_thresholds)},
                        {"runs", std::move(scores)},
                        {"summary", score_summary(transfers)},
                        {"status", status(transfer_ok)}});
      all_pass = all_pass && transfer_ok;
      if (wants_csv(config.format)) {
        outputs.write("transfer_curves_" + name + ".csv", transfer_curve_csv(transfers));
        outputs.write("transfer_aggregate_" + name + ".csv",
                      aggregate_curve_csv(aggregate_curves(transfers)));
      }
    }

    Json manifest{{"seeds", options.seeds},
                  {"test_seed_offset", 1000},
                  {"smoke", options.smoke},
                  {"learner", parse_json(learner_to_json(config.learner))},
                  {"experiments", std::move(blocks)},
                  {"all_pass", options.smoke ? Json(nullptr) : Json(all_pass)}};
    outputs.write("manifest.json", dump(manifest));

    for (const auto& b : manifest["experiments"]) {
      out << b["experiment"].get<std::string>() << ": " << b["status"].get<std::string>() << '\n';
    }
    return (options.smoke || all_pass) ? static_cast<int>(kOk) : static_cast<int>(kTraining);
  });
}

int cmd_probe(const ProbeOptions& options, std::ostream& out) {
  const ExperimentConfig config = resolve_config(options.common);
  const TabularMdp mdp = load_mdp(config.mdp);
  const RewardTable reward =
      options.reward_path ? load_probe_reward(*options.reward_path) : mdp.reward;
  const std::size_t n_dynamics = options.n_dynamics.value_or(config.transfer.n_dynamics);

  std::vector<TransitionTable> extra;
  std::vector<std::string> extra_names;
  if (options.with_swapped_dynamics) {
    if (config.mdp.kind != MdpSource::Kind::counterexample) {
      throw UsageError("--with-swapped-dynamics needs a counterexample MDP");
    }
    const auto other = config.mdp.variant == CounterexampleVariant::original
                           ? CounterexampleVariant::modified
                           : CounterexampleVariant::original;
    extra.push_back(counterexample_mdp(other).transition);
    extra_names.push_back(other == CounterexampleVariant::modified ? "counterexample_modified"
                                                                   : "counterexample_original");
  }

  const ProbeResult result =
      disentanglement_probe(mdp, reward, n_dynamics, config.learner.seed, extra);
  OutputSet outputs(config.out_dir);
  return with_outputs(outputs, [&] {
    if (wants_csv(config.format)) {
      std::string csv = "index,dynamics,agrees\n";
      for (std::size_t i = 0; i < result.agrees.size(); ++i) {
        const std::string source =
            i < n_dynamics ? "sampled_" + std::to_string(i) : extra_names[i - n_dynamics];
        csv += std::to_string(i) + ',' + source + ',' + (result.agrees[i] ? "1" : "0") + '\n';
      }
      outputs.write("probe.csv", csv);
    }
    if (wants_json(config.format)) {
      Json j{{"n_dynamics", n_dynamics},
             {"seed", config.learner.seed},
             {"extra_dynamics", extra_names},
             {"agrees", result.agrees},
             {"fraction", result.fraction()}};
      outputs.write("probe.json", dump(j));
    }
    out << "agreement fraction " << format_float(result.fraction()) << " over "
        << result.agrees.size() << " dynamics\n";
    return static_cast<int>(kOk);
  });
}

}  // namespace irl::cli
