#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "irl_cli/config.hpp"

namespace irl::cli {

/// Options shared by every experiment command after flags are merged into the
/// config file.
struct CommonOptions {
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::string> format;
};

/// Reads the config file (if any) and applies flag overrides. `--seed` sets
/// the learner seed and the seed of a generated MDP.
ExperimentConfig resolve_config(const CommonOptions& options);

struct GenerateOptions {
  bool paper_tabular = false;
  std::optional<std::string> counterexample;  // "original" | "modified"
  bool shaped_reward = false;                 // writes r' instead of an MDP
  std::optional<std::size_t> states;
  std::optional<std::size_t> actions;
  std::uint64_t seed = 0;
  std::string output;
};

int cmd_generate(const GenerateOptions& options, std::ostream& out);
int cmd_train(const CommonOptions& options, std::ostream& out);
int cmd_transfer(const CommonOptions& options, std::ostream& out);

struct ReproduceOptions {
  CommonOptions common;
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
  bool smoke = false;
};

/// Exit 0 when every threshold passes (or all are skipped), 4 otherwise.
int cmd_reproduce_tabular(const ReproduceOptions& options, std::ostream& out);

struct ProbeOptions {
  CommonOptions common;
  /// Reward JSON, or the reward.json written by `train`; empty = true reward.
  std::optional<std::string> reward_path;
  std::optional<std::size_t> n_dynamics;
  /// Counterexample MDPs only: also probe the other variant's dynamics.
  bool with_swapped_dynamics = false;
};

int cmd_probe(const ProbeOptions& options, std::ostream& out);

/// Full command-line entry point; args excludes the program name. Maps every
/// failure onto the exit-code contract (0 ok, 2 usage, 3 I/O, 4 training).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace irl::cli
