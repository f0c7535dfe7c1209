#pragma once

#include <filesystem>
#include <iosfwd>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "riskfront/risk.hpp"
#include "riskfront/serialization.hpp"

namespace riskfront {

/// Malformed or inconsistent experiment configuration (exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Risk functional as written in a config. Threshold specs may be relative to
/// the risk-neutral mean (t_rel) instead of absolute.
struct SpecConfig {
  RiskKind kind = RiskKind::Mean;
  double param = 0.0;
  bool relative = false;
};

struct ExperimentConfig {
  /// Directory of the config file; relative paths inside it resolve from here.
  std::filesystem::path base_dir = ".";
  Json env;
  double epsilon = 1e-2;
  double beta_min = -10.0;
  std::vector<std::string> methods{"front"};
  std::vector<SpecConfig> specs;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
  std::optional<std::filesystem::path> front_file;
  double tp_grid_eps = 0.05;
  int evar_grid_points = 200;
  std::vector<double> precisions;
  /// Simplex-ensemble benchmark settings.
  int ensemble_problems = 100;
  int ensemble_actions = 10;
  int ensemble_atoms = 10;
  double ensemble_lo = -15.0;
  double ensemble_hi = 15.0;
};

/// Parses a config document. base_dir resolves relative file paths. Throws ConfigError.
ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Builds the MDP named by a config "env" entry. Throws ConfigError.
TabularMDP build_env(const Json& env, std::uint64_t seed, const std::filesystem::path& base_dir);

/// CSV number formatting: 6 significant digits, "nan" for missing values.
std::string format_number(double v);

int cmd_front(const ExperimentConfig& cfg, std::ostream& log);
int cmd_evaluate(const ExperimentConfig& cfg, std::ostream& log);
int cmd_bench(const ExperimentConfig& cfg, std::ostream& log);

/// Entry point of the riskfront tool: `riskfront front|evaluate|bench --config <path> [--out <dir>]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace riskfront
