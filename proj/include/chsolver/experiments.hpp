#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "chsolver/initial_conditions.hpp"
#include "chsolver/step_policy.hpp"

namespace chs {

enum class ScenarioKind { Convergence, KissingBubbles, Coarsening2d, Coarsening3d };

std::string to_string(ScenarioKind kind);
/// Throws ValidationError for unknown names.
ScenarioKind scenario_from_string(std::string_view name);

enum class InitialKind { Bubble, Kissing, Random, Constant };

std::string to_string(InitialKind kind);
InitialKind initial_from_string(std::string_view name);

struct InitialCondition {
  InitialKind kind = InitialKind::Bubble;
  double value = 0.0;  // Constant only
  RandRange rand_range = RandRange::Symmetric;
  KissingOptions kissing;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::Convergence;
  int dim = 2;
  int modes = 128;
  double length = 0.0;  // 0 means 2*pi
  double eps = 0.2;
  double horizon = 0.1;
  StepPolicy policy = FixedStep{1e-4};
  std::uint64_t seed = 1;
  bool dealias = false;
  InitialCondition initial;
  std::vector<double> snapshot_times;

  Grid grid() const;
};

/// Parameter set of the corresponding numerical experiment:
///   convergence     eps = 0.2, T = 0.1, bubble, random mesh of 400 steps
///   kissing_bubbles eps^2 = 0.1, T = 1, adaptive [1e-4, 7e-3], alpha = 0.01
///   coarsening2d    eps = 0.3, T = 3, adaptive [1e-5, 1e-4], alpha = 0.01
///   coarsening3d    N = 48, eps = 2 pi / 48, T = 1.8, adaptive [4e-5, 1e-4], alpha = 1
Scenario default_scenario(ScenarioKind kind);

SpectralField initial_field(const Scenario& scenario);

struct Snapshot {
  double t;
  SpectralField phi;
};

struct ScenarioResult {
  std::vector<StepRecord> records;
  std::vector<Snapshot> snapshots;
  GsavState final_state;
};

using SnapshotSink = std::function<void(const Snapshot&)>;

/// Runs the scenario. Snapshot time s is served by the first state with
/// t >= s (the snapshot carries the actual time).
ScenarioResult run_scenario(const Scenario& scenario, const StepObserver& on_step = {},
                            const SnapshotSink& on_snapshot = {});

/// (log e_coarse - log e_fine) / (log tau_coarse - log tau_fine).
/// Throws DegenerateRatio when the step sizes coincide.
double order_of(double e_coarse, double e_fine, double tau_coarse, double tau_fine);

struct ConvergenceSetup {
  int modes = 64;
  double eps = 0.2;
  double horizon = 0.1;
  std::size_t base_steps = 50;
  std::size_t levels = 4;
  /// Fixed-step count of the reference run; 0 means 32x the finest level.
  std::size_t reference_steps = 0;
  std::uint64_t seed = 1;
  /// Concurrent runs; 0 reads CHSOLVER_THREADS, falling back to the core count.
  std::size_t threads = 0;
};

struct ConvergenceRow {
  std::size_t steps = 0;
  double tau_max = 0.0;
  double h1_error = 0.0;
  double h1_order = 0.0;  // NaN on the first row
  double gamma_error = 0.0;
  double gamma_order = 0.0;
  double max_ratio = 0.0;
  double xi_deviation = 0.0;  // max_n |1 - xi^n|
  double xi_order = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::size_t reference_steps = 0;
  /// E(phi_ref(T)) + 1, the stand-in for the exact modified energy.
  double reference_gamma = 0.0;
};

/// Temporal convergence study on the bubble initial condition: random meshes
/// of base_steps * 2^l steps compared against a fine fixed-step run of the
/// same scheme on the same grid.
ConvergenceReport run_convergence(const ConvergenceSetup& setup);

/// Worker count from CHSOLVER_THREADS, or the hardware concurrency.
std::size_t worker_threads();

}  // namespace chs
