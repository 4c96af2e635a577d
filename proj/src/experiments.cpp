#include "chsolver/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "chsolver/errors.hpp"

namespace chs {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::Convergence: return "convergence";
    case ScenarioKind::KissingBubbles: return "kissing_bubbles";
    case ScenarioKind::Coarsening2d: return "coarsening2d";
    case ScenarioKind::Coarsening3d: return "coarsening3d";
  }
  return "unknown";
}

ScenarioKind scenario_from_string(std::string_view name) {
  for (auto kind : {ScenarioKind::Convergence, ScenarioKind::KissingBubbles,
                    ScenarioKind::Coarsening2d, ScenarioKind::Coarsening3d})
    if (name == to_string(kind)) return kind;
  throw ValidationError("unknown scenario '" + std::string(name) + "'");
}

std::string to_string(InitialKind kind) {
  switch (kind) {
    case InitialKind::Bubble: return "bubble";
    case InitialKind::Kissing: return "kissing";
    case InitialKind::Random: return "random";
    case InitialKind::Constant: return "constant";
  }
  return "unknown";
}

InitialKind initial_from_string(std::string_view name) {
  for (auto kind : {InitialKind::Bubble, InitialKind::Kissing, InitialKind::Random,
                    InitialKind::Constant})
    if (name == to_string(kind)) return kind;
  throw ValidationError("unknown initial condition '" + std::string(name) + "'");
}

Grid Scenario::grid() const {
  return Grid(dim, modes, length > 0.0 ? length : 2.0 * std::numbers::pi);
}

Scenario default_scenario(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::Convergence:
      s.eps = 0.2;
      s.horizon = 0.1;
      s.initial.kind = InitialKind::Bubble;
      s.policy = PrescribedMesh{random_mesh(s.horizon, 400, s.seed)};
      s.snapshot_times = {0.0, 0.1};
      break;
    case ScenarioKind::KissingBubbles:
      s.eps = std::sqrt(0.1);
      s.horizon = 1.0;
      s.initial.kind = InitialKind::Kissing;
      s.policy = make_adaptive(1e-4, 7e-3, 0.01);
      s.snapshot_times = {0.0, 0.1, 0.2, 0.5, 0.8, 1.0};
      break;
    case ScenarioKind::Coarsening2d:
      s.eps = 0.3;
      s.horizon = 3.0;
      s.initial.kind = InitialKind::Random;
      s.policy = make_adaptive(1e-5, 1e-4, 0.01);
      s.snapshot_times = {0.0, 0.1, 0.2, 1.0, 2.0, 3.0};
      break;
    case ScenarioKind::Coarsening3d:
      s.dim = 3;
      s.modes = 48;
      s.eps = 2.0 * std::numbers::pi / 48.0;
      s.horizon = 1.8;
      s.initial.kind = InitialKind::Random;
      s.policy = make_adaptive(4e-5, 1e-4, 1.0);
      s.snapshot_times = {0.0, 0.2, 0.4, 0.8, 1.0, 1.8};
      break;
  }
  return s;
}

SpectralField initial_field(const Scenario& scenario) {
  const Grid grid = scenario.grid();
  switch (scenario.initial.kind) {
    case InitialKind::Bubble: return ic_bubble(grid, scenario.eps);
    case InitialKind::Kissing:
      return ic_kissing(grid, scenario.eps * scenario.eps, scenario.initial.kissing);
    case InitialKind::Random: return ic_random(grid, scenario.seed, scenario.initial.rand_range);
    case InitialKind::Constant: return ic_constant(grid, scenario.initial.value);
  }
  throw ValidationError("unhandled initial condition");
}

ScenarioResult run_scenario(const Scenario& scenario, const StepObserver& on_step,
                            const SnapshotSink& on_snapshot) {
  GsavState initial = init_state(initial_field(scenario), scenario.eps, scenario.dealias);

  std::vector<double> pending = scenario.snapshot_times;
  std::sort(pending.begin(), pending.end());
  std::size_t next_snapshot = 0;
  ScenarioResult result{{}, {}, initial};

  auto take_snapshots = [&](const GsavState& state) {
    while (next_snapshot < pending.size() &&
           state.time >= pending[next_snapshot] - 1e-12 * std::max(1.0, scenario.horizon)) {
      Snapshot snap{state.time, state.phi_prev1};
      if (on_snapshot) on_snapshot(snap);
      result.snapshots.push_back(std::move(snap));
      ++next_snapshot;
    }
  };

  take_snapshots(initial);
  auto run = run_with_policy(initial, scenario.policy, scenario.horizon,
                             [&](const GsavState& state, const StepRecord& record) {
                               if (on_step) on_step(state, record);
                               take_snapshots(state);
                             });
  result.records = std::move(run.records);
  result.final_state = std::move(run.state);
  return result;
}

double order_of(double e_coarse, double e_fine, double tau_coarse, double tau_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(tau_coarse > 0.0) || !(tau_fine > 0.0))
    throw std::invalid_argument("order_of: all inputs must be positive");
  if (tau_coarse == tau_fine) throw DegenerateRatio("order_of: step sizes coincide");
  return (std::log(e_coarse) - std::log(e_fine)) / (std::log(tau_coarse) - std::log(tau_fine));
}

std::size_t worker_threads() {
  if (const char* env = std::getenv("CHSOLVER_THREADS")) {
    char* end = nullptr;
    long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct LevelOutcome {
  GsavState final_state;
  double xi_deviation = 0.0;
};

LevelOutcome run_level(const GsavState& initial, const StepPolicy& policy, double horizon) {
  LevelOutcome out{initial};
  double worst = 0.0;
  auto run = run_with_policy(initial, policy, horizon, [&](const GsavState&, const StepRecord& r) {
    worst = std::max(worst, std::abs(1.0 - r.xi));
  });
  out.final_state = std::move(run.state);
  out.xi_deviation = worst;
  return out;
}

}  // namespace

ConvergenceReport run_convergence(const ConvergenceSetup& setup) {
  if (setup.levels < 1 || setup.base_steps < 2)
    throw ValidationError("convergence needs at least one level of >= 2 steps");
  Scenario scenario = default_scenario(ScenarioKind::Convergence);
  scenario.modes = setup.modes;
  scenario.eps = setup.eps;
  const Grid grid = scenario.grid();
  const GsavState initial = init_state(ic_bubble(grid, setup.eps), setup.eps);

  const std::size_t finest = setup.base_steps << (setup.levels - 1);
  const std::size_t ref_steps = setup.reference_steps ? setup.reference_steps : 32 * finest;

  // Task 0 is the reference; task l+1 is level l.
  std::vector<StepPolicy> policies;
  policies.emplace_back(FixedStep{setup.horizon / static_cast<double>(ref_steps)});
  std::vector<TimeMesh> meshes;
  for (std::size_t l = 0; l < setup.levels; ++l) {
    meshes.push_back(random_mesh(setup.horizon, setup.base_steps << l, setup.seed + l));
    policies.emplace_back(PrescribedMesh{meshes.back()});
  }

  std::vector<LevelOutcome> outcomes(policies.size(), LevelOutcome{initial});
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < policies.size(); i = next++) {
      try {
        outcomes[i] = run_level(initial, policies[i], setup.horizon);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t nthreads =
      std::min(policies.size(), setup.threads ? setup.threads : worker_threads());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  const SpectralField& reference = outcomes[0].final_state.phi_prev1;
  ConvergenceReport report;
  report.reference_steps = ref_steps;
  report.reference_gamma = energy(reference, setup.eps) + 1.0;

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t l = 0; l < setup.levels; ++l) {
    const LevelOutcome& level = outcomes[l + 1];
    ConvergenceRow row;
    row.steps = meshes[l].count();
    row.tau_max = meshes[l].max_step();
    row.max_ratio = meshes[l].max_ratio();
    row.h1_error = h1_norm(level.final_state.phi_prev1 - reference);
    row.gamma_error = std::abs(level.final_state.gamma - report.reference_gamma);
    row.xi_deviation = level.xi_deviation;
    row.h1_order = row.gamma_order = row.xi_order = nan;
    if (l > 0) {
      const ConvergenceRow& prev = report.rows.back();
      row.h1_order = order_of(prev.h1_error, row.h1_error, prev.tau_max, row.tau_max);
      row.gamma_order = order_of(prev.gamma_error, row.gamma_error, prev.tau_max, row.tau_max);
      row.xi_order = order_of(prev.xi_deviation, row.xi_deviation, prev.tau_max, row.tau_max);
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace chs
