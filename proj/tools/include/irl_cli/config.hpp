#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "irl/airl.hpp"
#include "irl/mdp.hpp"

namespace irl::cli {

enum class OutputFormat { csv, json, both };

OutputFormat output_format_from_string(std::string_view name);
bool wants_csv(OutputFormat format);
bool wants_json(OutputFormat format);

/// Where an experiment's MDP comes from.
///
///   {"kind": "paper_tabular", "seed": 7}
///   {"kind": "random", "states": 6, "actions": 2, "seed": 0}
///   {"kind": "counterexample", "variant": "original"}
///   {"kind": "file", "path": "mdp.json"}
struct MdpSource {
  enum class Kind { paper_tabular, random, counterexample, file };
  Kind kind = Kind::paper_tabular;
  std::uint64_t seed = 0;
  std::size_t states = 0;
  std::size_t actions = 0;
  CounterexampleVariant variant = CounterexampleVariant::original;
  std::string path;
};

TabularMdp load_mdp(const MdpSource& source);

struct TransferBlock {
  std::vector<std::uint64_t> train_seeds{0, 1, 2, 3, 4};
  std::vector<std::uint64_t> test_seeds{1000, 1001, 1002, 1003, 1004};
  /// Optional explicit MDP files; they replace the seeded tabular pair.
  std::optional<std::string> train_mdp;
  std::optional<std::string> test_mdp;
  std::size_t n_dynamics = 50;
};

/// Top-level config document. Every block is optional:
///
///   {"mdp": {...}, "learner": {...}, "transfer": {...},
///    "output": {"dir": "out", "format": "both"}}
struct ExperimentConfig {
  MdpSource mdp;
  LearnerConfig learner;
  TransferBlock transfer;
  std::string out_dir = ".";
  OutputFormat format = OutputFormat::both;
};

/// Strict parse: unknown keys, wrong types and missing referenced files throw
/// std::invalid_argument naming the problem. `base_dir` resolves relative
/// file paths.
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = ".");

LearnerConfig parse_learner(std::string_view text);
std::string learner_to_json(const LearnerConfig& config, int indent = -1);

}  // namespace irl::cli
