#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qf/types.hpp"

namespace qf {

// exit-code contract of the scenario runner
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitCheckFailed = 4;

struct ScenarioConfig {
  // grid
  int n_per_dim = 4;
  int dim = 1;
  double box_length = 2.0 * M_PI;
  // potential
  std::string profile = "gaussian";
  double amplitude = 0.5;
  double range = 1.0;
  double reg = -1.0;  // <= 0: one lattice spacing
  // statistics and initial data
  std::string statistics = "fermi";
  std::string initial_kind = "paired";
  std::uint64_t seed = 1;
  int slater_n = 1;
  double state_scale = 1.0;
  double condensate_amplitude = 1.0;
  std::string initial_file;
  // run block
  double t_final = 1.0;
  double dt = 1e-3;
  std::string scheme = "rk4";
  int snapshot_stride = 0;  // 0: final snapshot only
  bool with_propagator = false;
  std::optional<double> cutoff;
  // picard block
  bool has_picard = false;
  double picard_interval = 0.05;
  int picard_steps = 64;
  double picard_tol = 1e-10;
  int picard_max_iter = 30;
  double picard_reference_dt = 1e-4;
  // verification
  std::vector<std::string> verify;
  std::vector<std::pair<std::string, double>> tolerances;  // overrides by check name
  std::string out_dir = "out";
};

ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::string& path);

// Runs one subcommand. Writes the artifact files into out_dir (created if
// missing) and returns the process exit code; on failure an error.json is
// left next to the other outputs.
int run_scenario(const std::string& subcommand, ScenarioConfig cfg,
                 const std::string& out_dir_override = "",
                 std::optional<std::uint64_t> seed_override = std::nullopt);

// convenience wrapper: loads the config file and reports parse failures
// through the same error.json + exit-code contract
int run_scenario_file(const std::string& subcommand, const std::string& config_path,
                      const std::string& out_dir_override = "",
                      std::optional<std::uint64_t> seed_override = std::nullopt);

}  // namespace qf
