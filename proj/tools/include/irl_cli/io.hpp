#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace irl::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kIo = 3, kTraining = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Learner divergence or a failed acceptance threshold.
struct TrainingFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Files written by one command; `discard` removes them after a failure.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);

  const std::filesystem::path& dir() const { return dir_; }
  void write(const std::string& name, const std::string& content);
  const std::vector<std::filesystem::path>& written() const { return written_; }
  void discard() noexcept;

 private:
  std::filesystem::path dir_;
  std::vector<std::filesystem::path> written_;
};

}  // namespace irl::cli
