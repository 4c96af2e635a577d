#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chsolver/experiments.hpp"

namespace chs {

/// Flat run configuration. Text form is one `key = value` per line grouped
/// in sections:
///
///   [scenario]     name, seed
///   [grid]         dim, N, L, dealias
///   [model]        eps, eps2 (either; eps2 sets eps = sqrt(eps2))
///   [initial]      kind, value, rand_range, kissing_grouping, kissing_offset
///   [time]         T, policy (fixed | random | adaptive), tau, steps,
///                  tau_min, tau_max, alpha, delta
///   [output]       dir, snapshot_times (comma separated), record_every
///   [convergence]  base_K, levels, reference_steps
///
/// '#' starts a comment. Unknown sections or keys are errors; missing keys
/// take the scenario defaults.
struct SimConfig {
  std::string scenario = "convergence";
  std::uint64_t seed = 1;

  int dim = 2;
  int modes = 128;
  double length = 0.0;  // 0 means 2*pi
  bool dealias = false;

  double eps = 0.2;

  std::string initial = "bubble";
  double initial_value = 0.0;
  std::string rand_range = "symmetric";
  std::string kissing_grouping = "standard";
  double kissing_offset = 1.0;

  double horizon = 0.1;
  std::string policy = "random";
  double tau = 1e-4;
  std::size_t steps = 400;
  double tau_min = 1e-4;
  double tau_max = 7e-3;
  double alpha = 0.01;
  double delta = kDefaultRatioMargin;

  std::string output_dir = "out";
  std::vector<double> snapshot_times;
  std::size_t record_every = 1;

  std::size_t base_steps = 50;
  std::size_t levels = 4;
  std::size_t reference_steps = 0;

  bool operator==(const SimConfig&) const = default;
};

/// Defaults matching default_scenario(kind).
SimConfig config_defaults(ScenarioKind kind);

/// Parses config text. scenario_override, when set, wins over the file's
/// [scenario] name. Throws ParseError (with line number) or ValidationError.
SimConfig parse_config_text(std::string_view text,
                            std::optional<std::string> scenario_override = std::nullopt);
SimConfig parse_config(const std::filesystem::path& path,
                       std::optional<std::string> scenario_override = std::nullopt);

std::string serialize_config(const SimConfig& config);

/// Throws ValidationError naming the violated invariant.
void validate(const SimConfig& config);

Scenario to_scenario(const SimConfig& config);
ConvergenceSetup to_convergence_setup(const SimConfig& config);

}  // namespace chs
