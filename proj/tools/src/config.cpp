#include "irl_cli/config.hpp"

#include <filesystem>
#include <stdexcept>

#include "irl_cli/io.hpp"
#include "json.hpp"

namespace irl::cli {

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

void require_object(const Json& j, std::initializer_list<const char*> allowed,
                    const std::string& context) {
  if (!j.is_object()) throw std::invalid_argument(context + " must be a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) known = known || item.key() == key;
    if (!known) throw std::invalid_argument("unknown key '" + item.key() + "' in " + context);
  }
}

std::uint64_t get_count(const Json& j, const char* key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw std::invalid_argument(context + "." + key + " must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

double get_real(const Json& j, const char* key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw std::invalid_argument(context + "." + key + " must be a number");
  return v.get<double>();
}

std::string get_string(const Json& j, const char* key, const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_string()) throw std::invalid_argument(context + "." + key + " must be a string");
  return v.get<std::string>();
}

std::vector<std::uint64_t> get_seed_list(const Json& j, const char* key,
                                         const std::string& context) {
  const auto& v = j.at(key);
  if (!v.is_array() || v.empty()) {
    throw std::invalid_argument(context + "." + key + " must be a nonempty array");
  }
  std::vector<std::uint64_t> out;
  for (const auto& x : v) {
    if (!x.is_number_unsigned() && !(x.is_number_integer() && x.get<long long>() >= 0)) {
      throw std::invalid_argument(context + "." + key + " must hold nonnegative integers");
    }
    out.push_back(x.get<std::uint64_t>());
  }
  return out;
}

std::string existing_file(const std::string& path, const std::string& base_dir,
                          const std::string& context) {
  fs::path p(path);
  if (p.is_relative()) p = fs::path(base_dir) / p;
  if (!fs::is_regular_file(p)) {
    throw std::invalid_argument(context + " refers to missing file '" + p.string() + "'");
  }
  return p.string();
}

MdpSource parse_mdp_source(const Json& j, const std::string& base_dir) {
  const std::string ctx = "mdp";
  require_object(j, {"kind", "seed", "states", "actions", "variant", "path"}, ctx);
  if (!j.contains("kind")) throw std::invalid_argument("mdp.kind is required");
  const std::string kind = get_string(j, "kind", ctx);
  MdpSource out;
  const auto only = [&](std::initializer_list<const char*> keys) {
    std::initializer_list<const char*> all = {"seed", "states", "actions", "variant", "path"};
    for (const char* key : all) {
      bool allowed = false;
      for (const char* k : keys) allowed = allowed || std::string_view(k) == key;
      if (!allowed && j.contains(key)) {
        throw std::invalid_argument("unknown key '" + std::string(key) + "' in mdp of kind '" +
                                    kind + "'");
      }
    }
  };
  if (kind == "paper_tabular") {
    only({"seed"});
    out.kind = MdpSource::Kind::paper_tabular;
    if (j.contains("seed")) out.seed = get_count(j, "seed", ctx);
  } else if (kind == "random") {
    only({"seed", "states", "actions"});
    out.kind = MdpSource::Kind::random;
    if (!j.contains("states") || !j.contains("actions")) {
      throw std::invalid_argument("mdp of kind 'random' needs 'states' and 'actions'");
    }
    out.states = get_count(j, "states", ctx);
    out.actions = get_count(j, "actions", ctx);
    if (j.contains("seed")) out.seed = get_count(j, "seed", ctx);
  } else if (kind == "counterexample") {
    only({"variant"});
    out.kind = MdpSource::Kind::counterexample;
    if (j.contains("variant")) {
      const std::string v = get_string(j, "variant", ctx);
      if (v == "original") {
        out.variant = CounterexampleVariant::original;
      } else if (v == "modified") {
        out.variant = CounterexampleVariant::modified;
      } else {
        throw std::invalid_argument("mdp.variant must be 'original' or 'modified'");
      }
    }
  } else if (kind == "file") {
    only({"path"});
    out.kind = MdpSource::Kind::file;
    if (!j.contains("path")) throw std::invalid_argument("mdp of kind 'file' needs 'path'");
    out.path = existing_file(get_string(j, "path", ctx), base_dir, "mdp.path");
  } else {
    throw std::invalid_argument("unknown mdp.kind '" + kind + "'");
  }
  return out;
}

LearnerConfig parse_learner_json(const Json& j) {
  const std::string ctx = "learner";
  require_object(j,
                 {"variant", "mode", "iterations", "disc_steps_per_iter", "disc_step_size",
                  "replay_window", "n_policy_trajectories", "n_expert_trajectories",
                  "entropy_weight", "vi_tolerance", "seed"},
                 ctx);
  LearnerConfig c;
  if (j.contains("variant")) c.variant = learner_variant_from_string(get_string(j, "variant", ctx));
  if (j.contains("mode")) c.mode = data_mode_from_string(get_string(j, "mode", ctx));
  if (j.contains("iterations")) c.iterations = get_count(j, "iterations", ctx);
  if (j.contains("disc_steps_per_iter")) {
    c.disc_steps_per_iter = get_count(j, "disc_steps_per_iter", ctx);
  }
  if (j.contains("disc_step_size")) c.disc_step_size = get_real(j, "disc_step_size", ctx);
  if (j.contains("replay_window")) c.replay_window = get_count(j, "replay_window", ctx);
  if (j.contains("n_policy_trajectories")) {
    c.n_policy_trajectories = get_count(j, "n_policy_trajectories", ctx);
  }
  if (j.contains("n_expert_trajectories")) {
    c.n_expert_trajectories = get_count(j, "n_expert_trajectories", ctx);
  }
  if (j.contains("entropy_weight")) c.entropy_weight = get_real(j, "entropy_weight", ctx);
  if (j.contains("vi_tolerance")) c.vi_tolerance = get_real(j, "vi_tolerance", ctx);
  if (j.contains("seed")) c.seed = get_count(j, "seed", ctx);
  validate_config(c);
  return c;
}

TransferBlock parse_transfer(const Json& j, const std::string& base_dir) {
  const std::string ctx = "transfer";
  require_object(j, {"train_seeds", "test_seeds", "train_mdp", "test_mdp", "n_dynamics"}, ctx);
  TransferBlock out;
  if (j.contains("train_seeds")) out.train_seeds = get_seed_list(j, "train_seeds", ctx);
  if (j.contains("test_seeds")) out.test_seeds = get_seed_list(j, "test_seeds", ctx);
  if (out.train_seeds.size() != out.test_seeds.size()) {
    throw std::invalid_argument("transfer.train_seeds and transfer.test_seeds differ in length");
  }
  if (j.contains("train_mdp")) {
    out.train_mdp = existing_file(get_string(j, "train_mdp", ctx), base_dir, "transfer.train_mdp");
  }
  if (j.contains("test_mdp")) {
    out.test_mdp = existing_file(get_string(j, "test_mdp", ctx), base_dir, "transfer.test_mdp");
  }
  if (out.train_mdp.has_value() != out.test_mdp.has_value()) {
    throw std::invalid_argument("transfer.train_mdp and transfer.test_mdp go together");
  }
  if (j.contains("n_dynamics")) out.n_dynamics = get_count(j, "n_dynamics", ctx);
  return out;
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
}

}  // namespace

OutputFormat output_format_from_string(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  if (name == "both") return OutputFormat::both;
  throw std::invalid_argument("format must be csv, json or both");
}

bool wants_csv(OutputFormat format) { return format != OutputFormat::json; }
bool wants_json(OutputFormat format) { return format != OutputFormat::csv; }

TabularMdp load_mdp(const MdpSource& source) {
  switch (source.kind) {
    case MdpSource::Kind::paper_tabular:
      return tabular_task_mdp(source.seed);
    case MdpSource::Kind::random:
      return random_mdp(source.states, source.actions,
                        RewardTable::zeros(RewardKind::state_only, source.states, source.actions),
                        source.seed);
    case MdpSource::Kind::counterexample:
      return counterexample_mdp(source.variant);
    case MdpSource::Kind::file:
      return mdp_from_json(read_file(source.path));
  }
  throw std::invalid_argument("unreachable mdp kind");
}

ExperimentConfig parse_config(std::string_view text, const std::string& base_dir) {
  const Json j = parse_document(text);
  require_object(j, {"mdp", "learner", "transfer", "output"}, "config");
  ExperimentConfig out;
  if (j.contains("mdp")) out.mdp = parse_mdp_source(j.at("mdp"), base_dir);
  if (j.contains("learner")) out.learner = parse_learner_json(j.at("learner"));
  if (j.contains("transfer")) out.transfer = parse_transfer(j.at("transfer"), base_dir);
  if (j.contains("output")) {
    const auto& o = j.at("output");
    require_object(o, {"dir", "format"}, "output");
    if (o.contains("dir")) out.out_dir = get_string(o, "dir", "output");
    if (o.contains("format")) out.format = output_format_from_string(get_string(o, "format", "output"));
  }
  return out;
}

LearnerConfig parse_learner(std::string_view text) { return parse_learner_json(parse_document(text)); }

std::string learner_to_json(const LearnerConfig& c, int indent) {
  Json j{{"variant", std::string(to_string(c.variant))},
         {"mode", std::string(to_string(c.mode))},
         {"iterations", c.iterations},
         {"disc_steps_per_iter", c.disc_steps_per_iter},
         {"disc_step_size", c.disc_step_size},
         {"replay_window", c.replay_window},
         {"n_policy_trajectories", c.n_policy_trajectories},
         {"n_expert_trajectories", c.n_expert_trajectories},
         {"entropy_weight", c.entropy_weight},
         {"vi_tolerance", c.vi_tolerance},
         {"seed", c.seed}};
  return j.dump(indent);
}

}  // namespace irl::cli
