#pragma once

// Run configuration: key-value text with `[run]` and `[problem]` sections.
//
//   subcommand = optimize        # or simulate, gradcheck, certify,
//                                #    estimate-constants, multistart
//   [problem]
//   alpha = 0.1
//   nu = 0.1
//   T = 1
//   grid = 32
//   steps = 50
//   y0 = (1,1,0.5) (2,1,0.1)     # stream-function modes (k1, k2, amplitude)
//
// Keys before the first section header belong to [run].

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sgfopt/certificates.hpp"
#include "sgfopt/state_solver.hpp"

namespace sgfopt {

enum class Subcommand { simulate, optimize, gradcheck, certify, estimate_constants, multistart };

std::string_view to_string(Subcommand s);
std::optional<Subcommand> subcommand_from_string(std::string_view s);

struct ModeTerm {
  int k1 = 1;
  int k2 = 1;
  double amplitude = 0.0;
  bool operator==(const ModeTerm&) const = default;
};

/// Parses "(k1,k2,amp) (k1,k2,amp) ..."; throws ConfigError naming `key`.
std::vector<ModeTerm> parse_modes(const std::string& text, const std::string& key, int line);

/// psi = sum amp sin(k1 pi x1) sin(k2 pi x2), as a flagged velocity.
VectorField2D velocity_from_modes(const Grid& grid, const std::vector<ModeTerm>& modes);

struct RunConfig {
  std::optional<Subcommand> subcommand;
  ModelParams params;
  std::vector<ModeTerm> y0_modes;
  std::vector<ModeTerm> yd_modes;
  std::vector<ModeTerm> u_modes;
  std::optional<std::filesystem::path> yd_reference;
  std::optional<std::filesystem::path> constants_path;
  std::filesystem::path out = "sgfopt-out";
  std::uint64_t seed = 0;
  int snapshot_every = 10;
  std::optional<double> tol;
  int max_iter = 500;
  int starts = 4;
  int samples = 100;
  Lambda3Reading lambda3_reading = Lambda3Reading::as_printed;

  /// Line of each key in the source file, for error messages.
  std::map<std::string, int> key_lines;
};

/// Every accepted key, as `section.key`.
const std::vector<std::string>& known_config_keys();

/// Strict parse: unknown keys and malformed values throw ConfigError with
/// the line number; relative paths resolve against `base_dir`.
RunConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});
RunConfig parse_config(const std::filesystem::path& path);

/// Builds and validates the problem; invariant violations become
/// ConfigError naming the field and the line of its key.
ProblemData build_problem(const RunConfig& cfg);

/// Constants from the configured file, or unit defaults.
DomainConstants load_constants(const RunConfig& cfg);

}  // namespace sgfopt
