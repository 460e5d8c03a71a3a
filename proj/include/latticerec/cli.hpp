#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "latticerec/autonomous.hpp"
#include "latticerec/json_io.hpp"
#include "latticerec/monoid.hpp"
#include "latticerec/nonautonomous.hpp"

namespace latticerec {

inline constexpr int kExitOk = 0;
inline constexpr int kExitIncompatible = 1;  // also path disagreement
inline constexpr int kExitSampled = 2;
inline constexpr int kExitUsage = 3;
inline constexpr int kExitParse = 4;
inline constexpr int kExitEvaluation = 5;

int exit_code_for(ErrorKind kind);

enum class SystemKind { kAutonomous, kNonautonomous, kMonoid, kMatrix };
std::string_view to_string(SystemKind kind);

/// A validated system document. Every kind except nonautonomous also keeps
/// its step maps, so the autonomous machinery applies to it directly.
struct SystemConfig {
  SystemKind kind = SystemKind::kAutonomous;
  std::size_t dimension = 1;
  StateSpace space;
  std::vector<StepMap> maps;
  std::optional<NonAutonomousSystem> timed;
  std::shared_ptr<const Monoid> monoid;
  std::vector<MonoidElement> elements;
  std::vector<RationalMatrix> rational_matrices;
  std::vector<ModMatrix> mod_matrices;
  Limits limits;
  std::vector<State> sample;
  std::string digest;

  AutonomousSystem autonomous() const { return AutonomousSystem(maps); }
};

/// line/column are 1-based and set for syntax errors only; `path` is a JSON
/// pointer for semantic errors.
struct ConfigError {
  std::string path;
  std::string message;
  std::size_t line = 0;
  std::size_t column = 0;
};

struct ParsedConfig {
  std::optional<SystemConfig> config;
  std::vector<ConfigError> errors;
};

/// Strict: unknown or duplicate keys are errors, and every semantic error
/// is reported, not just the first.
ParsedConfig parse_config(std::string_view text);

struct CommandOptions {
  std::optional<std::string> t0;
  std::optional<std::string> x0;
  std::optional<std::string> t;
  std::optional<std::string> corner;
  std::optional<int> axis;
  bool allow_negative = false;
  bool unsafe_incompatible = false;
  std::optional<std::size_t> path_cap;
  std::optional<std::uint64_t> volume_cap;
};

struct CommandResult {
  int exit_code = kExitOk;
  Json document;
  std::string csv;  // trace only
};

CommandResult cmd_check(const SystemConfig& config, const CommandOptions& options);
CommandResult cmd_eval(const SystemConfig& config, const CommandOptions& options);
CommandResult cmd_trace(const SystemConfig& config, const CommandOptions& options);
CommandResult cmd_paths(const SystemConfig& config, const CommandOptions& options);
CommandResult cmd_extend(const SystemConfig& config, const CommandOptions& options);

/// The whole tool: `args` excludes the program name. The result document
/// goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace latticerec
