#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ssqp/bench.hpp"
#include "ssqp/oracles.hpp"
#include "ssqp/sqp.hpp"

namespace ssqp {

enum class Subcommand { Run, Bench, Profile, CheckGrad, ListProblems };

std::optional<Subcommand> parse_subcommand(std::string_view s);

struct CliConfig {
  Subcommand subcommand = Subcommand::ListProblems;
  std::optional<std::filesystem::path> config_path;
  std::vector<std::string> overrides;  // "section.key=value"
  std::filesystem::path output_dir = ".";
  std::optional<std::uint64_t> seed;   // replaces oracle.seed when set
  unsigned jobs = 1;
  std::optional<std::string> problem;  // run / check-grad: built-in problem
  std::optional<std::filesystem::path> problem_file;  // run / check-grad: QP JSON file
};

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { ParseError, ValidationError };

  ConfigError(Kind kind, std::string key, const std::string& what)
      : std::runtime_error(what), kind_(kind), key_(std::move(key)) {}

  Kind kind() const { return kind_; }
  /// Dotted key of the offending entry, empty when the document itself is bad.
  const std::string& key() const { return key_; }

 private:
  Kind kind_;
  std::string key_;
};

struct ParsedConfig {
  SolverParams solver;
  OracleConfig oracle;
  ExperimentGrid grid;  // grid.params and grid.seed mirror solver and oracle.seed
};

/// Config document: {"solver": {...}, "oracle": {...}, "grid": {...}}.
/// Overrides are applied after the document; values are parsed as JSON and
/// fall back to plain strings.
ParsedConfig parse_config_text(std::string_view json_text,
                               const std::vector<std::string>& overrides = {});
ParsedConfig parse_config(const std::optional<std::filesystem::path>& path,
                          const std::vector<std::string>& overrides = {});

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitFailure = 3;

int exit_code_for(RunStatus s);

/// Executes one subcommand. Machine-readable results go to `out`,
/// diagnostics to `err`.
int dispatch(const CliConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace ssqp
