#include "chsolver/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chsolver/config.hpp"
#include "chsolver/errors.hpp"
#include "chsolver/experiments.hpp"
#include "chsolver/invariants.hpp"
#include "chsolver/io.hpp"
#include "chsolver/kernels.hpp"

namespace chs {
namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::string> scenario;
  std::optional<std::string> output_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> modes;
  std::optional<double> horizon;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("config", o.config_path, "Configuration file")->required();
  cmd->add_option("--scenario", o.scenario, "Scenario name overriding the file");
  cmd->add_option("--out", o.output_dir, "Output directory");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--N", o.modes, "Fourier modes per direction");
  cmd->add_option("--T", o.horizon, "Final time");
}

SimConfig load(const Overrides& o) {
  SimConfig c = parse_config(o.config_path, o.scenario);
  if (o.output_dir) c.output_dir = *o.output_dir;
  if (o.seed) c.seed = *o.seed;
  if (o.modes) c.modes = *o.modes;
  if (o.horizon) c.horizon = *o.horizon;
  validate(c);
  return c;
}

double policy_ratio_bound(const SimConfig& c) {
  return c.policy == "fixed" ? 0.0 : r_max_root() - c.delta;
}

int run_simulate(const SimConfig& c, std::ostream& out) {
  const std::filesystem::path dir = c.output_dir;
  std::filesystem::create_directories(dir);
  const Scenario scenario = to_scenario(c);
  RecordWriter writer(dir / "records.csv");
  std::size_t snap_index = 0;
  std::optional<StepRecord> pending;
  auto result = run_scenario(
      scenario,
      [&](const GsavState&, const StepRecord& r) {
        if (r.n % c.record_every == 0) {
          writer.append(r);
          pending.reset();
        } else {
          pending = r;
        }
      },
      [&](const Snapshot& s) {
        char name[64];
        std::snprintf(name, sizeof name, "snapshot_%03zu.chsnap", snap_index++);
        write_snapshot(s.phi, s.t, dir / name);
      });
  if (pending) writer.append(*pending);

  const auto& last = result.records.empty() ? StepRecord{} : result.records.back();
  out << "scenario " << c.scenario << ": " << result.records.size() << " steps to t = "
      << format_double(result.final_state.time) << ", gamma = " << format_double(last.gamma)
      << ", snapshots = " << result.snapshots.size() << "\n";
  return 0;
}

int run_converge(const SimConfig& c, std::ostream& out) {
  auto report = run_convergence(to_convergence_setup(c));
  std::filesystem::create_directories(c.output_dir);
  std::ofstream file(std::filesystem::path(c.output_dir) / "convergence.csv");
  if (!file) throw IoError("cannot write convergence.csv");
  write_convergence(report.rows, file);
  write_convergence(report.rows, out);
  return 0;
}

int run_kernels(const SimConfig& c, std::ostream& out) {
  const TimeMesh mesh = random_mesh(c.horizon, c.steps, c.seed);
  mesh.require_a1(c.delta);
  std::filesystem::create_directories(c.output_dir);
  std::ofstream file(std::filesystem::path(c.output_dir) / "kernels.csv");
  if (!file) throw IoError("cannot write kernels.csv");
  file << "n,j,theta,p,doc_residual,dcc_residual\n";

  double worst_doc = 0.0, worst_dcc = 0.0, worst_sum = 0.0, worst_bound = 0.0;
  const double tau_max = mesh.max_step();
  for (std::size_t n = 1; n <= mesh.count(); ++n) {
    auto theta = doc_kernels(mesh, n);
    auto p = dcc_kernels(mesh, n);
    auto rd = doc_residuals(mesh, n, theta);
    auto rp = dcc_residuals(mesh, n, p);
    double sum = 0.0;
    for (std::size_t j = 1; j <= n; ++j) {
      file << n << ',' << j << ',' << format_double(theta[j - 1]) << ',' << format_double(p[j - 1])
           << ',' << format_double(rd[j - 1]) << ',' << format_double(rp[j - 1]) << '\n';
      worst_doc = std::max(worst_doc, std::abs(rd[j - 1]));
      worst_dcc = std::max(worst_dcc, std::abs(rp[j - 1]));
      worst_bound = std::max(worst_bound, p[j - 1] / (2.0 * tau_max));
      sum += p[j - 1];
    }
    worst_sum = std::max(worst_sum, std::abs(sum - mesh.time(n)));
  }
  out << "steps " << mesh.count() << ", max ratio " << format_double(mesh.max_ratio()) << "\n"
      << "max |doc residual| " << format_double(worst_doc) << "\n"
      << "max |dcc residual| " << format_double(worst_dcc) << "\n"
      << "max |sum p - t_n| " << format_double(worst_sum) << "\n"
      << "max p / (2 tau_max) " << format_double(worst_bound) << "\n";
  return 0;
}

int run_check(const SimConfig& c, const std::optional<std::string>& records_path,
              std::ostream& out, std::ostream& err) {
  std::vector<std::string> violations;
  std::size_t checked = 0;
  if (records_path) {
    auto records = read_records(*records_path);
    InvariantLimits limits;
    limits.volume = to_scenario(c).grid().volume();
    limits.max_ratio = policy_ratio_bound(c);
    violations = check_invariants(records, limits);
    checked = records.size();
  } else {
    const Scenario scenario = to_scenario(c);
    auto result = run_scenario(scenario);
    GsavState initial = init_state(initial_field(scenario), scenario.eps, scenario.dealias);
    violations = check_invariants(result.records, limits_for(initial, policy_ratio_bound(c)));
    checked = result.records.size();
  }
  for (const auto& v : violations) err << "violation: " << v << "\n";
  out << checked << " records checked, " << violations.size() << " violations\n";
  return violations.empty() ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cahn-Hilliard gSAV BDF2 solver"};
  app.require_subcommand(1);

  Overrides simulate_opts, converge_opts, kernels_opts, check_opts;
  std::optional<std::string> records_path;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario");
  add_common(simulate, simulate_opts);
  auto* converge = app.add_subcommand("converge", "Temporal convergence study");
  add_common(converge, converge_opts);
  auto* kernels = app.add_subcommand("kernels", "Dump DOC/DCC kernels");
  add_common(kernels, kernels_opts);
  auto* check = app.add_subcommand("check", "Run the invariant suite");
  add_common(check, check_opts);
  check->add_option("--records", records_path, "Audit an existing records CSV instead of running");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (*simulate) return run_simulate(load(simulate_opts), out);
    if (*converge) return run_converge(load(converge_opts), out);
    if (*kernels) return run_kernels(load(kernels_opts), out);
    if (*check) return run_check(load(check_opts), records_path, out, err);
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace chs
