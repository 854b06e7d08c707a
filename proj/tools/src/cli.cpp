#include <exception>
#include <ostream>

#include "CLI11.hpp"
#include "irl/airl.hpp"
#include "irl_cli/commands.hpp"
#include "irl_cli/io.hpp"

namespace irl::cli {

namespace {

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "JSON experiment config");
  cmd->add_option("--seed", o.seed, "Seed for the learner and any generated MDP");
  cmd->add_option("--out", o.out_dir, "Output directory");
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json", "both"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tabular maximum-entropy IRL laboratory", "irl-lab"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Write an MDP (or the shaped reward) as JSON");
  generate->add_flag("--paper-tabular", gen.paper_tabular, "16-state, 4-action tabular task");
  generate->add_option("--counterexample", gen.counterexample, "original | modified")
      ->check(CLI::IsMember({"original", "modified"}));
  generate->add_flag("--shaped-reward", gen.shaped_reward,
                     "Write the action-dependent counterexample reward");
  generate->add_option("--states", gen.states, "Random MDP state count");
  generate->add_option("--actions", gen.actions, "Random MDP action count");
  generate->add_option("--seed", gen.seed, "Generator seed");
  generate->add_option("-o,--output", gen.output, "Output file")->required();

  CommonOptions train_opts;
  auto* train = app.add_subcommand("train", "Run the adversarial learner on one MDP");
  add_common(train, train_opts);

  CommonOptions transfer_opts;
  auto* transfer = app.add_subcommand("transfer", "Learn on train dynamics, re-optimize on test");
  add_common(transfer, transfer_opts);

  ReproduceOptions repro;
  auto* reproduce =
      app.add_subcommand("reproduce-tabular", "Recovery and transfer over a seed list");
  add_common(reproduce, repro.common);
  reproduce->add_option("--seeds", repro.seeds, "Comma-separated training seeds")
      ->delimiter(',');
  reproduce->add_flag("--smoke", repro.smoke, "Zero learner iterations; thresholds skipped");

  ProbeOptions probe_opts;
  auto* probe = app.add_subcommand("probe", "Policy agreement across sampled dynamics");
  add_common(probe, probe_opts.common);
  probe->add_option("--reward", probe_opts.reward_path, "Reward JSON (default: true reward)");
  probe->add_option("--n-dynamics", probe_opts.n_dynamics, "Number of sampled dynamics");
  probe->add_flag("--with-swapped-dynamics", probe_opts.with_swapped_dynamics,
                  "Counterexample MDPs: also probe the other variant's dynamics");

  std::vector<std::string> argv_storage{"irl-lab"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*generate) return cmd_generate(gen, out);
    if (*train) return cmd_train(train_opts, out);
    if (*transfer) return cmd_transfer(transfer_opts, out);
    if (*reproduce) return cmd_reproduce_tabular(repro, out);
    if (*probe) return cmd_probe(probe_opts, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return kIo;
  } catch (const TrainingDivergence& e) {
    err << "training failure: " << e.what() << " (iteration " << e.iteration() << ")\n";
    return kTraining;
  } catch (const TrainingFailure& e) {
    err << "training failure: " << e.what() << '\n';
    return kTraining;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "training failure: " << e.what() << '\n';
    return kTraining;
  }
  return kUsage;
}

}  // namespace irl::cli
