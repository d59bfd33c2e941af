#pragma once

// Command-line front end: configuration resolution, experiment dispatch and
// deterministic output files.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bohm/experiments.hpp"

namespace bohm::cli {

/// Exit-code contract.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitRuntimeError = 3;

enum class OutputFormat { tsv, csv };

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { unknown_key, type_mismatch, missing_experiment, syntax };

  ConfigError(Kind kind, std::string key, std::string detail, std::string expected = {},
              std::string suggestion = {});

  Kind kind() const noexcept { return kind_; }
  /// Offending key (or experiment name / file location).
  const std::string& key() const noexcept { return key_; }
  /// Expected type name for type mismatches.
  const std::string& expected_type() const noexcept { return expected_; }
  /// Nearest valid key for unknown keys or experiments; empty if none.
  const std::string& suggestion() const noexcept { return suggestion_; }

 private:
  Kind kind_;
  std::string key_;
  std::string expected_;
  std::string suggestion_;
};

/// Raw request as typed on the command line.
struct CommandLine {
  std::string experiment;
  std::optional<std::filesystem::path> config_file;
  std::optional<std::filesystem::path> out_dir;
  OutputFormat format = OutputFormat::tsv;
  /// --key value pairs in command-line order (--seed/--samples included).
  std::vector<std::pair<std::string, std::string>> overrides;
};

/// Fully resolved run configuration.
struct RunConfig {
  const ExperimentInfo* experiment = nullptr;
  ParamSet params;
  /// key -> "default" | "file" | "flag"
  std::map<std::string, std::string> sources;
  std::filesystem::path out_dir;
  OutputFormat format = OutputFormat::tsv;
  std::optional<std::filesystem::path> config_file;

  std::uint64_t seed() const;  ///< value of the "seed" parameter, 0 if none
};

/// Flat `key = value` lines; `#` starts a comment. Throws ConfigError(syntax)
/// on malformed lines or duplicate keys.
std::vector<std::pair<std::string, std::string>> read_config_file(
    const std::filesystem::path& path);

/// Resolves defaults, config-file entries and flags (flag > file > default),
/// validating every key and literal against the experiment schema.
RunConfig parse_config(const CommandLine& cmd);

/// Parses `bohm-measure run <experiment> ...` arguments (after `run`).
CommandLine parse_run_arguments(const std::vector<std::string>& args);

/// Edit distance used for "did you mean" suggestions.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Name, figure reference and description of every experiment, one per line.
std::string list_experiments();

/// Formats a double with 17 significant digits.
std::string format_number(double value);

/// Writes one delimited table with a header row.
void write_table(const DataTable& table, const std::filesystem::path& path,
                 OutputFormat format);
/// Reads a table written by write_table.
DataTable read_table(const std::filesystem::path& path, OutputFormat format);

/// Executes the experiment and writes manifest.json, the data tables and
/// summary.tsv into cfg.out_dir. Returns the exit code.
int run_experiment(const RunConfig& cfg, std::ostream& log);

/// Whole program: `list` or `run ...`. Returns the exit code.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bohm::cli
